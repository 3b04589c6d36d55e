#include <gtest/gtest.h>

#include "twistor/twistor.hpp"

using namespace twistor;

TEST(QuadricJson, RoundTrip) {
  const Quadric q = random_real_point_free(2, 3);
  const Quadric back = io::parse_quadric(io::quadric_to_json(q).dump());
  EXPECT_LT((back.matrix() - q.matrix()).norm(), 1e-15);
  EXPECT_EQ(io::quadric_to_json(q)["n"], 2);
}

TEST(QuadricJson, RejectsMalformedInput) {
  EXPECT_THROW(io::parse_quadric("not json"), io::ParseError);
  EXPECT_THROW(io::parse_quadric(R"({"n": 1})"), io::ParseError);
  EXPECT_THROW(io::parse_quadric(R"({"n": 2, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]})"), io::ParseError);
  EXPECT_THROW(io::parse_quadric(R"({"n": 0, "matrix": [[[1,0],[0,0]],[[0,0],[1]]]})"), io::ParseError);
  EXPECT_NO_THROW(io::parse_quadric(R"({"n": 0, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]})"));
}

TEST(PointAndPlaneJson, RoundTrip) {
  const OrientedPlane plane = random_plane(3, 4);
  EXPECT_TRUE(io::plane_from_json(io::plane_to_json(plane)).same_as(plane, 1e-15));
  const ProjectivePoint p = point_in_fiber(plane, Complex(0.3, 1.2));
  EXPECT_TRUE(io::point_from_json(io::point_to_json(p)).approx_equal(p, 1e-15));
}

TEST(NormalFormReport, PhasesRounded) {
  const Quadric q = random_real_point_free(1, 5);
  const nlohmann::json r = io::normal_form_report(q, normal_form(q));
  ASSERT_TRUE(r.contains("phases"));
  ASSERT_TRUE(r.contains("residual"));
  ASSERT_TRUE(r.contains("basis"));
  for (const auto& p : r["phases"]) {
    const double x = p.get<double>();
    EXPECT_EQ(x, io::round_significant(x));
  }
  EXPECT_EQ(io::round_significant(0.123456789012345), 0.123456789012);
}

TEST(SamplesCsv, HeaderAndRows) {
  const Quadric q(ComplexMatrix::Identity(3, 3));
  const auto samples = section_sample(q, 4, 1);
  const std::string csv = io::samples_csv(samples, std::vector<double>(4, 0.0));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,u0,u1,u2,v0,v1,v2,tau_re,tau_im,on_quadric");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(TauScatter, IsSvgDocument) {
  const std::string svg = io::tau_scatter_svg({Complex(0.0, 1.0), Complex(-0.5, 2.0)});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(SweepReport, Fields) {
  const Quadric q(ComplexMatrix::Identity(3, 3));
  const auto samples = section_sample(q, 2, 1);
  const nlohmann::json r = io::sweep_report(samples, {1e-12, 2e-12});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].contains("plane"));
  EXPECT_EQ(r[1]["residual"].get<double>(), 2e-12);
}
