// Command-line front end for the flat twistor correspondence.
//
// Exit codes: 0 success, 1 parse/config error, 2 degenerate input,
// 3 correspondence violated, 4 identity/verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistor/twistor.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace twistor;

namespace {

enum ExitCode : int {
  kOk = 0,
  kParse = 1,
  kDegenerate = 2,
  kCorrespondence = 3,
  kIdentityFailure = 4,
};

struct RunConfig {
  std::uint64_t seed = 1;
  int n = 1;
  int trials = -1;  // -1: command default
  std::vector<std::string> tol_overrides;
  std::map<std::string, double> tolerances;
  std::string output_dir;
  std::string format = "json";
  double perturb = 0.0;
  double step = Tolerances{}.fd_step;
  std::vector<int> n_list = {1, 2, 3, 5};
  bool break_xi = false;
  bool svg = false;
  std::string file;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Defaults for every named tolerance; --tol name=value overrides.
std::map<std::string, double> default_tolerances() {
  const Tolerances t;
  return {{"rank", t.rank},         {"det", t.det},           {"definite", t.definite},
          {"root", t.root},         {"holomorphy", 1e-5},     {"torsion", 1e-5},
          {"identity", 1e-10},      {"on_quadric", 1e-10}};
}

void finalize(RunConfig& cfg, int default_trials) {
  cfg.tolerances = default_tolerances();
  for (const auto& item : cfg.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got " + item);
    const std::string name = item.substr(0, eq);
    if (!cfg.tolerances.count(name)) throw ConfigError("unknown tolerance " + name);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad tolerance value in " + item);
    }
    if (!(value > 0.0)) throw ConfigError("tolerance " + name + " must be positive");
    cfg.tolerances[name] = value;
  }
  if (cfg.trials == -1) cfg.trials = default_trials;
  if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
  if (cfg.n < 0) throw ConfigError("--n must be >= 0");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
  if (cfg.output_dir.empty()) {
    if (const char* env = std::getenv("TWISTOR_OUTPUT_DIR")) cfg.output_dir = env;
  }
}

Tolerances library_tolerances(const RunConfig& cfg) {
  Tolerances t;
  t.rank = cfg.tolerances.at("rank");
  t.det = cfg.tolerances.at("det");
  t.definite = cfg.tolerances.at("definite");
  t.root = cfg.tolerances.at("root");
  t.fd_step = cfg.step;
  return t;
}

Quadric load_quadric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return io::parse_quadric(buf.str());
}

void write_file(const RunConfig& cfg, const std::string& name, const std::string& content) {
  fs::create_directories(cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / name, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + name);
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
  if (cfg.output_dir.empty())
    std::cout << content;
  else
    write_file(cfg, name, content);
}

json header(const std::string& command, const RunConfig& cfg) {
  return {{"schema_version", io::kSchemaVersion}, {"command", command}, {"seed", cfg.seed}};
}

int cmd_quadric_check(const RunConfig& cfg) {
  const Quadric q = load_quadric(cfg.file);
  const Tolerances tol = library_tolerances(cfg);
  json report = header("quadric check", cfg);
  report["n"] = q.ambient_n();
  report["smooth"] = is_smooth(q, tol.det);
  if (!report["smooth"].get<bool>()) {
    report["verdict"] = "degenerate";
    std::cout << report.dump(2) << '\n';
    std::cerr << "degenerate quadric\n";
    return kDegenerate;
  }
  const bool real = has_real_points(q, tol);
  report["has_real_points"] = real;
  if (real) {
    report["verdict"] = "has real points";
  } else {
    const PencilNormalForm nf = normal_form(q, tol);
    report["normal_form"] = io::normal_form_report(q, nf);
    bool all_zero = true;
    for (double p : nf.phases) all_zero = all_zero && std::abs(p) < 1e-9;
    report["verdict"] = all_zero ? "no real points; phases all 0" : "no real points";
  }
  std::cout << report.dump(2) << '\n';
  std::cerr << report["verdict"].get<std::string>() << '\n';
  return kOk;
}

int cmd_quadric_random(const RunConfig& cfg) {
  const PlantedQuadric planted = random_real_point_free_record(cfg.n, cfg.seed);
  json doc = io::quadric_to_json(planted.quadric);
  json phases = json::array();
  for (double p : planted.phases) phases.push_back(io::round_significant(p));
  doc["generation"] = {{"seed", cfg.seed}, {"phases", std::move(phases)}};
  emit(cfg, "quadric.json", doc.dump(2) + "\n");
  return kOk;
}

int cmd_section_sample(const RunConfig& cfg) {
  const Quadric q = load_quadric(cfg.file);
  const Tolerances tol = library_tolerances(cfg);
  require_smooth(q, "section sample", tol.det);
  const auto samples = section_sample(q, cfg.trials, cfg.seed, tol);
  std::vector<double> on_quadric;
  std::vector<Complex> taus;
  double worst = 0.0;
  for (const auto& s : samples) {
    const ComplexVector& z = s.point.coords();
    const double r = std::abs(evaluate(q, z)) / (q.spectral_norm() * z.squaredNorm());
    on_quadric.push_back(r);
    taus.push_back(s.tau);
    worst = std::max(worst, r);
  }
  if (cfg.format == "csv") {
    emit(cfg, "samples.csv", io::samples_csv(samples, on_quadric));
  } else {
    json doc = header("section sample", cfg);
    doc["max_on_quadric"] = worst;
    json arr = json::array();
    for (std::size_t k = 0; k < samples.size(); ++k)
      arr.push_back({{"plane", io::plane_to_json(samples[k].plane)},
                     {"point", io::point_to_json(samples[k].point)},
                     {"tau", io::complex_to_json(samples[k].tau)},
                     {"on_quadric", on_quadric[k]}});
    doc["samples"] = std::move(arr);
    emit(cfg, "samples.json", doc.dump(2) + "\n");
  }
  if (cfg.svg) write_file(cfg, "tau_scatter.svg", io::tau_scatter_svg(taus));
  return worst < cfg.tolerances.at("on_quadric") ? kOk : kCorrespondence;
}

int cmd_holomorphy(const RunConfig& cfg) {
  const Quadric q = load_quadric(cfg.file);
  const Tolerances tol = library_tolerances(cfg);
  require_smooth(q, "holomorphy", tol.det);
  if (q.dimension() >= 3 && has_real_points(q, tol))
    throw HasRealPoints("holomorphy: quadric has real points");
  Section section = quadric_section(q, tol);
  if (cfg.perturb != 0.0)
    section = perturbed_section(section, cfg.perturb, random_reference(q.ambient_n(), cfg.seed + 1));
  const auto planes = random_planes(q.ambient_n(), cfg.trials, cfg.seed);
  const double holo_tol = cfg.tolerances.at("holomorphy");
  const double torsion_tol = cfg.tolerances.at("torsion");

  double max_holo = 0.0;
  double max_torsion = 0.0;
  double min_holo = INFINITY;
  double min_torsion = INFINITY;
  int agree = 0;
  std::vector<SectionSample> samples;
  std::vector<double> residuals;
  for (const auto& plane : planes) {
    const HolomorphyReport h = holomorphy_residual(section, plane, cfg.step);
    const TorsionReport t = reduction_torsion_test(section, plane, cfg.step);
    max_holo = std::max(max_holo, h.residual);
    min_holo = std::min(min_holo, h.residual);
    max_torsion = std::max(max_torsion, t.max_zeta_bar);
    min_torsion = std::min(min_torsion, t.max_zeta_bar);
    if ((h.residual < holo_tol) == (t.max_zeta_bar < torsion_tol)) ++agree;
    const ProjectivePoint p = section(plane);
    samples.push_back({plane, p, fiber_coordinate(plane, p)});
    residuals.push_back(h.residual);
  }
  json report = header("holomorphy", cfg);
  report["n"] = q.ambient_n();
  report["trials"] = cfg.trials;
  report["perturb"] = cfg.perturb;
  report["step"] = cfg.step;
  report["max_holomorphy_residual"] = max_holo;
  report["min_holomorphy_residual"] = min_holo;
  report["max_torsion_coefficient"] = max_torsion;
  report["min_torsion_coefficient"] = min_torsion;
  report["agreement_fraction"] = static_cast<double>(agree) / cfg.trials;
  report["agreement"] = agree == cfg.trials;
  std::cout << report.dump(2) << '\n';
  if (!cfg.output_dir.empty()) {
    write_file(cfg, "holomorphy_report.json", report.dump(2) + "\n");
    write_file(cfg, "holomorphy_sweep.json", io::sweep_report(samples, residuals).dump(2) + "\n");
  }
  return agree == cfg.trials ? kOk : kIdentityFailure;
}

int cmd_flat_verify(const RunConfig& cfg) {
  for (int n : cfg.n_list)
    if (n < 1) throw ConfigError("--n-list entries must be >= 1");
  const auto results = cfg.break_xi
                           ? verify_flat_identities(cfg.n_list, cfg.trials, cfg.seed, CorruptedXiForms{})
                           : verify_flat_identities(cfg.n_list, cfg.trials, cfg.seed);
  const double threshold = cfg.tolerances.at("identity");
  json report = header("flat verify", cfg);
  json arr = json::array();
  bool pass = true;
  for (const auto& r : results) {
    arr.push_back(io::verification_entry(r.identity, r.n, r.trials, r.max_residual));
    pass = pass && r.max_residual < threshold;
  }
  report["threshold"] = threshold;
  report["results"] = std::move(arr);
  report["pass"] = pass;
  std::cout << report.dump(2) << '\n';
  if (!cfg.output_dir.empty()) write_file(cfg, "flat_verify.json", report.dump(2) + "\n");
  return pass ? kOk : kIdentityFailure;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--trials", cfg.trials, "Number of trials / samples");
  cmd->add_option("--tol", cfg.tol_overrides, "Tolerance override name=value (repeatable)");
  cmd->add_option("--out", cfg.output_dir, "Output directory (env TWISTOR_OUTPUT_DIR)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat twistor correspondence: quadrics without real points and holomorphic sections"};
  app.require_subcommand(1);
  RunConfig cfg;
  int default_trials = 1;
  std::function<int(const RunConfig&)> action;

  auto* quadric = app.add_subcommand("quadric", "Quadric analysis");
  quadric->require_subcommand(1);
  auto* check = quadric->add_subcommand("check", "Smoothness, real points and phase normal form");
  check->add_option("file", cfg.file, "Quadric JSON file")->required();
  add_common(check, cfg);
  check->callback([&] { action = cmd_quadric_check; });

  auto* random = quadric->add_subcommand("random", "Random real-point-free quadric with its phases");
  random->add_option("--n", cfg.n, "Ambient n (quadric in CP^{n+1})");
  add_common(random, cfg);
  random->callback([&] { action = cmd_quadric_random; });

  auto* section = app.add_subcommand("section", "Sections induced by a quadric");
  section->require_subcommand(1);
  auto* sample = section->add_subcommand("sample", "Sample the section at random planes");
  sample->add_option("file", cfg.file, "Quadric JSON file")->required();
  sample->add_option("--format", cfg.format, "json or csv");
  sample->add_flag("--svg", cfg.svg, "Also write tau_scatter.svg (requires --out)");
  add_common(sample, cfg);
  sample->callback([&] {
    default_trials = 100;
    action = cmd_section_sample;
  });

  auto* holo = app.add_subcommand("holomorphy", "Holomorphy and torsion sweeps over random planes");
  holo->add_option("file", cfg.file, "Quadric JSON file")->required();
  holo->add_option("--perturb", cfg.perturb, "Anti-holomorphic perturbation strength");
  holo->add_option("--step", cfg.step, "Finite-difference step");
  add_common(holo, cfg);
  holo->callback([&] {
    default_trials = 20;
    action = cmd_holomorphy;
  });

  auto* flat = app.add_subcommand("flat", "Flat-model identities");
  flat->require_subcommand(1);
  auto* verify = flat->add_subcommand("verify", "Structure, curvature, Bianchi, gauge identities");
  verify->add_option("--n-list", cfg.n_list, "Values of n")->delimiter(',');
  verify->add_flag("--break-xi", cfg.break_xi, "Test hook: corrupt the xi formula");
  add_common(verify, cfg);
  verify->callback([&] {
    default_trials = 1000;
    action = cmd_flat_verify;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    finalize(cfg, default_trials);
    if (cfg.svg && cfg.output_dir.empty()) throw ConfigError("--svg requires --out");
    return action(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kParse;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DegenerateQuadric& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return kDegenerate;
  } catch (const AmbientTooSmall& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return kDegenerate;
  } catch (const FiberMultiplicityError& e) {
    std::cerr << "correspondence violated: " << e.what() << '\n';
    return kCorrespondence;
  } catch (const HasRealPoints& e) {
    std::cerr << "correspondence violated: " << e.what() << '\n';
    return kCorrespondence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIdentityFailure;
  }
}
