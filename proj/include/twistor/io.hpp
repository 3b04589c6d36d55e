#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "twistor/projective.hpp"
#include "twistor/quadric.hpp"
#include "twistor/twistor_map.hpp"

namespace twistor::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ParseError : public Error {
 public:
  using Error::Error;
};

// Rounds to 12 significant digits (the precision of phase reports).
inline double round_significant(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

inline RealVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ParseError("expected a number");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

inline json point_to_json(const ProjectivePoint& p) {
  json out = json::array();
  for (Eigen::Index k = 0; k < p.dimension(); ++k) out.push_back(complex_to_json(p.coords()[k]));
  return out;
}

inline ProjectivePoint point_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("point: expected an array of [re, im] pairs");
  ComplexVector z(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) z[static_cast<Eigen::Index>(k)] = complex_from_json(j[k]);
  try {
    return ProjectivePoint(z);
  } catch (const std::exception& e) {
    throw ParseError(std::string("point: ") + e.what());
  }
}

inline json plane_to_json(const OrientedPlane& p) {
  return json::array({vector_to_json(p.u()), vector_to_json(p.v())});
}

inline OrientedPlane plane_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("plane: expected [u, v]");
  try {
    return OrientedPlane(vector_from_json(j[0]), vector_from_json(j[1]));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("plane: ") + e.what());
  }
}

inline json real_matrix_to_json(const RealMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

// { "n": int, "matrix": [[ [re, im], ... ], ...] }
inline json quadric_to_json(const Quadric& q) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < q.dimension(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < q.dimension(); ++k) row.push_back(complex_to_json(q.matrix()(i, k)));
    rows.push_back(std::move(row));
  }
  return {{"n", q.ambient_n()}, {"matrix", std::move(rows)}};
}

inline Quadric quadric_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("matrix"))
    throw ParseError("quadric: expected an object with \"n\" and \"matrix\"");
  if (!j["n"].is_number_integer()) throw ParseError("quadric: \"n\" must be an integer");
  const long long n = j["n"].get<long long>();
  const json& rows = j["matrix"];
  if (n < 0 || !rows.is_array() || rows.size() != static_cast<std::size_t>(n + 2))
    throw ParseError("quadric: matrix must have n + 2 rows");
  const Eigen::Index size = n + 2;
  ComplexMatrix m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(size))
      throw ParseError("quadric: matrix must be square");
    for (Eigen::Index k = 0; k < size; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  if (!m.allFinite()) throw ParseError("quadric: non-finite entries");
  return Quadric(m);
}

inline Quadric parse_quadric(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("quadric: invalid JSON: ") + e.what());
  }
  return quadric_from_json(j);
}

// "phases" rounded to 12 significant digits, "residual", "basis", "scale".
inline json normal_form_report(const Quadric& q, const PencilNormalForm& nf) {
  json phases = json::array();
  for (double p : nf.phases) phases.push_back(round_significant(p));
  return {{"phases", std::move(phases)},
          {"residual", normal_form_residual(q, nf)},
          {"basis", real_matrix_to_json(nf.basis)},
          {"scale", complex_to_json(nf.scale)}};
}

inline json verification_entry(const std::string& identity, int n, int trials, double max_residual) {
  return {{"identity", identity}, {"n", n}, {"trials", trials}, {"max_residual", max_residual}};
}

// [{ "plane", "tau": [re, im], "residual" }, ...]
inline json sweep_report(const std::vector<SectionSample>& samples,
                         const std::vector<double>& residuals) {
  json out = json::array();
  for (std::size_t k = 0; k < samples.size(); ++k)
    out.push_back({{"plane", plane_to_json(samples[k].plane)},
                   {"tau", complex_to_json(samples[k].tau)},
                   {"residual", residuals[k]}});
  return out;
}

inline std::string samples_csv(const std::vector<SectionSample>& samples,
                               const std::vector<double>& on_quadric) {
  std::ostringstream out;
  if (samples.empty()) return "index,tau_re,tau_im,on_quadric\n";
  const Eigen::Index size = samples.front().plane.dimension();
  out << "index";
  for (Eigen::Index k = 0; k < size; ++k) out << ",u" << k;
  for (Eigen::Index k = 0; k < size; ++k) out << ",v" << k;
  out << ",tau_re,tau_im,on_quadric\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i;
    for (Eigen::Index k = 0; k < size; ++k) out << ',' << format_double(samples[i].plane.u()[k]);
    for (Eigen::Index k = 0; k < size; ++k) out << ',' << format_double(samples[i].plane.v()[k]);
    out << ',' << format_double(samples[i].tau.real()) << ',' << format_double(samples[i].tau.imag())
        << ',' << format_double(on_quadric[i]) << '\n';
  }
  return out.str();
}

// Scatter of fibre coordinates in the upper half-plane, plain SVG text.
inline std::string tau_scatter_svg(const std::vector<Complex>& taus) {
  constexpr double kWidth = 480.0;
  constexpr double kHeight = 360.0;
  constexpr double kMargin = 30.0;
  double re_max = 1.0;
  double im_max = 1.0;
  for (const Complex& t : taus) {
    re_max = std::max(re_max, std::abs(t.real()));
    im_max = std::max(im_max, t.imag());
  }
  auto x_of = [&](double re) { return kMargin + (re + re_max) / (2.0 * re_max) * (kWidth - 2 * kMargin); };
  auto y_of = [&](double im) { return kHeight - kMargin - im / im_max * (kHeight - 2 * kMargin); };
  std::ostringstream out;
  char buf[160];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<title>fibre coordinates tau (upper half-plane)</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"black\"/>\n", kMargin,
                y_of(0.0), kWidth - kMargin, y_of(0.0));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"black\"/>\n", x_of(0.0),
                y_of(0.0), x_of(0.0), kMargin);
  out << buf;
  for (const Complex& t : taus) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\" fill=\"steelblue\"/>\n",
                  x_of(t.real()), y_of(t.imag()));
    out << buf;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace twistor::io
