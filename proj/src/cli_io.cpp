#include "crossed/cli_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "crossed/autoregression.hpp"
#include "crossed/diagnostics.hpp"
#include "crossed/missingness.hpp"
#include "crossed/rng.hpp"

namespace crossed {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::pair<double, double> implied_exponents(std::int64_t rows, std::int64_t cols,
                                            std::int64_t total) {
  if (rows < 1 || cols < 1 || total < 2) {
    throw std::invalid_argument("implied_exponents: need rows, cols >= 1 and total >= 2");
  }
  const double logn = std::log(static_cast<double>(total));
  return {std::log(static_cast<double>(rows)) / logn,
          std::log(static_cast<double>(cols)) / logn};
}

RatingsDataset load_ratings_csv(const std::filesystem::path& path, const IngestOptions& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_ratings_csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("load_ratings_csv: empty file " + path.string());
  }
  {
    const auto header = split_csv_line(line);
    if (header != std::vector<std::string>{"user_id", "item_id", "rating"}) {
      fail_line(path, 1, "expected header user_id,item_id,rating");
    }
  }

  struct RawRow {
    std::string user, item;
    double rating;
    std::size_t line_no;
  };
  std::vector<RawRow> raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) fail_line(path, line_no, "expected 3 fields");
    if (fields[0].empty() || fields[1].empty()) fail_line(path, line_no, "empty key");
    std::size_t pos = 0;
    double rating = 0.0;
    try {
      rating = std::stod(fields[2], &pos);
    } catch (const std::exception&) {
      fail_line(path, line_no, "unparseable rating '" + fields[2] + "'");
    }
    if (pos != fields[2].size() || !std::isfinite(rating)) {
      fail_line(path, line_no, "unparseable rating '" + fields[2] + "'");
    }
    raw.push_back(RawRow{fields[0], fields[1], rating, line_no});
    if (opt.max_rows > 0 && static_cast<std::int64_t>(raw.size()) >= opt.max_rows) break;
  }
  if (raw.empty()) throw std::runtime_error("load_ratings_csv: no data rows in " + path.string());

  if (opt.subsample > 0 && static_cast<std::int64_t>(raw.size()) > opt.subsample) {
    // Seeded reservoir sample, then restore file order.
    const std::size_t keep = static_cast<std::size_t>(opt.subsample);
    Rng rng(derive_seed(opt.seed, "ratings-subsample"));
    std::vector<std::size_t> picked(keep);
    for (std::size_t k = 0; k < keep; ++k) picked[k] = k;
    for (std::size_t k = keep; k < raw.size(); ++k) {
      const std::size_t r = static_cast<std::size_t>(rng.uniform() * static_cast<double>(k + 1));
      if (r < keep) picked[r] = k;
    }
    std::sort(picked.begin(), picked.end());
    std::vector<RawRow> kept;
    kept.reserve(keep);
    for (const std::size_t idx : picked) kept.push_back(std::move(raw[idx]));
    raw = std::move(kept);
  }

  RatingsDataset ds{{}, {}, ObservationSet(1, 1, {}), 0.0, 0.0};
  std::unordered_map<std::string, std::int32_t> user_ids, item_ids;
  std::unordered_set<std::uint64_t> seen;
  std::vector<Cell> cells;
  cells.reserve(raw.size());
  for (const RawRow& row : raw) {
    const auto [uit, unew] = user_ids.try_emplace(
        row.user, static_cast<std::int32_t>(ds.user_keys.size()));
    if (unew) ds.user_keys.push_back(row.user);
    const auto [iit, inew] = item_ids.try_emplace(
        row.item, static_cast<std::int32_t>(ds.item_keys.size()));
    if (inew) ds.item_keys.push_back(row.item);
    const std::uint64_t key = (static_cast<std::uint64_t>(uit->second) << 32) |
                              static_cast<std::uint32_t>(iit->second);
    if (!seen.insert(key).second) {
      fail_line(path, row.line_no,
                "duplicate (user,item) pair (" + row.user + "," + row.item + ")");
    }
    cells.push_back(Cell{uit->second, iit->second, row.rating});
  }

  ds.obs = ObservationSet(static_cast<Eigen::Index>(ds.user_keys.size()),
                          static_cast<Eigen::Index>(ds.item_keys.size()), std::move(cells));
  if (ds.obs.total() >= 2) {
    std::tie(ds.implied_rho, ds.implied_kappa) =
        implied_exponents(ds.obs.rows(), ds.obs.cols(), ds.obs.total());
  }
  return ds;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iter,a0,mu1,mu2,tau1,tau2,tauE\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << trace.iter[k] << ',' << format_double(trace.a0[k]) << ','
        << format_double(trace.mu1[k]) << ',' << format_double(trace.mu2[k]) << ','
        << format_double(trace.tau1[k]) << ',' << format_double(trace.tau2[k]) << ','
        << format_double(trace.tauE[k]) << '\n';
  }
}

ChainTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{
          "iter", "a0", "mu1", "mu2", "tau1", "tau2", "tauE"}) {
    throw std::runtime_error("read_trace_csv: bad header in " + path.string());
  }
  ChainTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7) fail_line(path, line_no, "expected 7 fields");
    try {
      trace.iter.push_back(std::stoll(fields[0]));
      trace.a0.push_back(std::stod(fields[1]));
      trace.mu1.push_back(std::stod(fields[2]));
      trace.mu2.push_back(std::stod(fields[3]));
      trace.tau1.push_back(std::stod(fields[4]));
      trace.tau2.push_back(std::stod(fields[5]));
      trace.tauE.push_back(std::stod(fields[6]));
    } catch (const std::exception&) {
      fail_line(path, line_no, "unparseable trace row");
    }
  }
  return trace;
}

void write_norm_table_csv(const std::filesystem::path& path,
                          const std::vector<NormTableRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "S,replicate,norm,radius\n";
  for (const NormTableRow& r : rows) {
    out << r.S << ',' << r.replicate << ',' << format_double(r.norm) << ','
        << format_double(r.radius) << '\n';
  }
}

void write_ess_csv(const std::filesystem::path& path, const std::vector<EssRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "parameter,sampler,S,ess,n\n";
  for (const EssRow& r : rows) {
    out << r.parameter << ',' << r.sampler << ',' << r.S << ',' << format_double(r.ess) << ','
        << r.n << '\n';
  }
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& config_path,
                                        const std::string& command,
                                        std::optional<std::uint64_t> seed_override,
                                        std::optional<std::string> out_override) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config " + config_path.string());
  ExperimentConfig cfg;
  try {
    in >> cfg.raw;
  } catch (const std::exception& e) {
    throw std::runtime_error("config parse error in " + config_path.string() + ": " + e.what());
  }
  cfg.command = command;
  cfg.seed = seed_override.value_or(cfg.raw.value("seed", std::uint64_t{0}));
  cfg.out_dir = out_override.value_or(cfg.raw.value("out_dir", std::string{"out"}));
  return cfg;
}

RegimeSpec regime_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
  RegimeSpec spec;
  spec.S = j.value("S", std::int64_t{10000});
  spec.rho = j.value("rho", 0.52);
  spec.kappa = j.value("kappa", 0.52);
  const std::string kind = j.value("kind", std::string{"mcar"});
  if (kind == "mcar") {
    spec.regime = Regime::MCAR;
  } else if (kind == "bounded") {
    spec.regime = Regime::BoundedInhomogeneous;
  } else if (kind == "almost_balanced") {
    spec.regime = Regime::AlmostBalanced;
  } else {
    throw std::runtime_error("config: unknown regime kind '" + kind + "'");
  }
  spec.upsilon = j.value("upsilon", 1.0);
  spec.eps_target = j.value("eps_target", 0.05);
  spec.seed = j.value("seed", default_seed);
  spec.validate();
  return spec;
}

nlohmann::json regime_to_json(const RegimeSpec& spec) {
  const char* kind = spec.regime == Regime::MCAR ? "mcar"
                     : spec.regime == Regime::BoundedInhomogeneous ? "bounded"
                                                                   : "almost_balanced";
  return {{"kind", kind},        {"S", spec.S},
          {"rho", spec.rho},     {"kappa", spec.kappa},
          {"upsilon", spec.upsilon}, {"eps_target", spec.eps_target},
          {"seed", spec.seed}};
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

VarianceComponents variance_from_json(const nlohmann::json& j) {
  return VarianceComponents(j.value("sigma1_sq", 1.0), j.value("sigma2_sq", 1.0),
                            j.value("sigmaE_sq", 1.0));
}

SamplerConfig sampler_from_json(const nlohmann::json& j, SamplerKind kind,
                                std::uint64_t master_seed, const std::string& label) {
  SamplerConfig cfg;
  cfg.kind = kind;
  cfg.iterations = j.value("iterations", std::int64_t{10000});
  cfg.burn_in = j.value("burn_in", std::int64_t{1000});
  cfg.fix_precisions = j.value("fix_precisions", true);
  cfg.seed = derive_seed(master_seed, label);
  const std::string init = j.value("init", std::string{"zeros"});
  if (init == "zeros") {
    cfg.init = InitKind::Zeros;
  } else if (init == "prior") {
    cfg.init = InitKind::PriorDraw;
  } else {
    throw std::runtime_error("config: unknown init '" + init + "'");
  }
  cfg.validate();
  return cfg;
}

struct LoadedData {
  ObservationSet obs;
  nlohmann::json meta;
};

// Either the configured ratings CSV or a synthetic draw from the regime block;
// the synthetic path uses fixed substream labels so simulate/sample/analyze
// agree on the data for a given master seed.
LoadedData dataset_for(const ExperimentConfig& config) {
  const nlohmann::json data = config.raw.value("data", nlohmann::json::object());
  const std::string csv = data.value("ratings_csv", std::string{});
  if (!csv.empty()) {
    IngestOptions opt;
    opt.max_rows = data.value("max_rows", std::int64_t{0});
    opt.subsample = data.value("subsample", std::int64_t{0});
    opt.seed = config.seed;
    RatingsDataset ds = load_ratings_csv(csv, opt);
    nlohmann::json meta = {{"source", csv},
                           {"R", ds.obs.rows()},
                           {"C", ds.obs.cols()},
                           {"N", ds.obs.total()},
                           {"implied_rho", ds.implied_rho},
                           {"implied_kappa", ds.implied_kappa}};
    return LoadedData{std::move(ds.obs), std::move(meta)};
  }

  const RegimeSpec spec =
      regime_from_json(config.raw.value("regime", nlohmann::json::object()), config.seed);
  const VarianceComponents vc =
      variance_from_json(config.raw.value("variance", nlohmann::json::object()));
  const double a0_true = config.raw.value("a0_true", 2.0);
  const ProbabilityPattern pattern = make_pattern(spec);
  const SparseBinaryMatrix z = sample_Z(pattern, derive_seed(config.seed, "z"));
  SyntheticData data_drawn =
      synthesize_responses(z, vc, a0_true, derive_seed(config.seed, "responses"));
  nlohmann::json meta = {{"source", "synthetic"},
                         {"S", spec.S},
                         {"rho", spec.rho},
                         {"kappa", spec.kappa},
                         {"upsilon", spec.upsilon},
                         {"R", data_drawn.obs.rows()},
                         {"C", data_drawn.obs.cols()},
                         {"N", data_drawn.obs.total()},
                         {"a0_true", a0_true}};
  return LoadedData{std::move(data_drawn.obs), std::move(meta)};
}

void cmd_simulate(const ExperimentConfig& config, std::vector<std::string>& outputs) {
  const RegimeSpec spec =
      regime_from_json(config.raw.value("regime", nlohmann::json::object()), config.seed);
  const VarianceComponents vc =
      variance_from_json(config.raw.value("variance", nlohmann::json::object()));
  const double a0_true = config.raw.value("a0_true", 2.0);
  const ProbabilityPattern pattern = make_pattern(spec);
  const SparseBinaryMatrix z = sample_Z(pattern, derive_seed(config.seed, "z"));
  const SyntheticData data =
      synthesize_responses(z, vc, a0_true, derive_seed(config.seed, "responses"));

  const std::filesystem::path ratings = config.out_dir / "ratings.csv";
  std::ofstream out(ratings, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + ratings.string());
  out << "user_id,item_id,rating\n";
  for (Eigen::Index i = 0; i < data.obs.rows(); ++i) {
    for (const auto& e : data.obs.row(i)) {
      out << i << ',' << e.index << ',' << format_double(e.y) << '\n';
    }
  }
  outputs.push_back("ratings.csv");

  nlohmann::json truth = {{"a0_true", a0_true},
                          {"sigma1_sq", vc.sigma1_sq()},
                          {"sigma2_sq", vc.sigma2_sq()},
                          {"sigmaE_sq", vc.sigmaE_sq()},
                          {"R", data.obs.rows()},
                          {"C", data.obs.cols()},
                          {"N", data.obs.total()},
                          {"mu1_true", data.truth.a1.mean()},
                          {"mu2_true", data.truth.a2.mean()},
                          {"S", spec.S},
                          {"rho", spec.rho},
                          {"kappa", spec.kappa}};
  write_json_file(config.out_dir / "truth.json", truth);
  outputs.push_back("truth.json");
}

void cmd_sample(const ExperimentConfig& config, std::vector<std::string>& outputs) {
  const LoadedData data = dataset_for(config);
  const VarianceComponents vc =
      variance_from_json(config.raw.value("variance", nlohmann::json::object()));
  const nlohmann::json sj = config.raw.value("sampler", nlohmann::json::object());
  const std::string which = sj.value("kind", std::string{"both"});

  const auto run_one = [&](SamplerKind kind, const std::string& name) {
    const SamplerConfig cfg = sampler_from_json(sj, kind, config.seed, name);
    const ChainTrace trace = run_chain(data.obs, vc, cfg);
    const std::string file = "trace_" + name + ".csv";
    write_trace_csv(config.out_dir / file, trace);
    outputs.push_back(file);
  };
  if (which == "collapsed" || which == "both") run_one(SamplerKind::Collapsed, "collapsed");
  if (which == "vanilla" || which == "both") run_one(SamplerKind::Vanilla, "vanilla");
  if (which != "collapsed" && which != "vanilla" && which != "both") {
    throw std::runtime_error("config: unknown sampler kind '" + which + "'");
  }
  write_json_file(config.out_dir / "data_meta.json", data.meta);
  outputs.push_back("data_meta.json");
}

void cmd_analyze(const ExperimentConfig& config, std::vector<std::string>& outputs) {
  const LoadedData data = dataset_for(config);
  const VarianceComponents vc =
      variance_from_json(config.raw.value("variance", nlohmann::json::object()));
  const AutoregressionBundle bundle = build_bundle(data.obs, vc);
  nlohmann::json report = bundle.to_json();
  report["R"] = data.obs.rows();
  report["N"] = data.obs.total();
  report["lambda_A"] = vc.lambda_a();
  report["lambda_B"] = vc.lambda_b();
  report["data"] = data.meta;
  write_json_file(config.out_dir / "autoregression.json", report);
  outputs.push_back("autoregression.json");
}

void cmd_diagnose(const ExperimentConfig& config, std::vector<std::string>& outputs) {
  const nlohmann::json dj = config.raw.value("diagnose", nlohmann::json::object());
  if (!dj.contains("traces") || !dj["traces"].is_array() || dj["traces"].empty()) {
    throw std::runtime_error("config: diagnose.traces must list at least one trace");
  }
  std::vector<EssRow> rows;
  nlohmann::json report = nlohmann::json::array();
  for (const nlohmann::json& t : dj["traces"]) {
    const std::string path = t.at("path").get<std::string>();
    const std::string sampler = t.value("sampler", std::string{"unknown"});
    const std::int64_t S = t.value("S", std::int64_t{0});
    const ChainTrace trace = read_trace_csv(path);
    const auto summaries = summarize_trace(trace);
    nlohmann::json entry = {{"path", path},
                            {"sampler", sampler},
                            {"S", S},
                            {"n", trace.size()},
                            {"acf_significance_band", trace.size() > 0
                                 ? 1.96 / std::sqrt(static_cast<double>(trace.size()))
                                 : 0.0},
                            {"parameters", nlohmann::json::array()}};
    for (const ParameterSummary& s : summaries) {
      nlohmann::json p = {{"parameter", s.parameter}, {"mean", s.mean}, {"sd", s.sd}};
      if (s.ess) {
        p["ess"] = s.ess->ess;
        p["truncation_lag"] = s.ess->truncation_lag;
        rows.push_back(EssRow{s.parameter, sampler, S, s.ess->ess,
                              static_cast<std::int64_t>(s.ess->n)});
      } else {
        p["error"] = s.error;
      }
      entry["parameters"].push_back(std::move(p));
    }
    report.push_back(std::move(entry));
  }
  write_ess_csv(config.out_dir / "ess.csv", rows);
  outputs.push_back("ess.csv");
  write_json_file(config.out_dir / "diagnosis.json", report);
  outputs.push_back("diagnosis.json");
}

int cmd_verify(const ExperimentConfig& config, std::vector<std::string>& outputs) {
  const nlohmann::json vj = config.raw.value("verify", nlohmann::json::object());
  const RegimeSpec spec =
      regime_from_json(config.raw.value("regime", nlohmann::json::object()), config.seed);
  const VarianceComponents vc =
      variance_from_json(config.raw.value("variance", nlohmann::json::object()));
  const int replicates = vj.value("replicates", 20);
  const double psi = vj.value("psi", 0.2);
  const double cap = vj.value("latala_cap", 3.0);
  const std::vector<std::int64_t> s_grid =
      vj.value("s_grid", std::vector<std::int64_t>{1000, 3162, 10000});
  const int z_instances = vj.value("z_norm_instances", 200);
  const std::vector<std::string> checks = vj.value(
      "checks", std::vector<std::string>{"concentration", "z_norm", "latala", "norm_vs_s"});

  bool all_pass = true;
  nlohmann::json summary = nlohmann::json::array();
  const auto emit = [&](const VerificationReport& rep, const std::string& file) {
    write_json_file(config.out_dir / file, rep.to_json());
    outputs.push_back(file);
    all_pass = all_pass && rep.pass;
    summary.push_back({{"check", rep.check}, {"file", file}, {"pass", rep.pass}});
  };

  for (const std::string& check : checks) {
    if (check == "concentration") {
      emit(verify_row_col_concentration(spec, psi, vj.value("concentration_replicates", 100)),
           "verify_concentration.json");
    } else if (check == "z_norm") {
      emit(z_norm_bound_sweep(spec, z_instances), "verify_z_norm.json");
    } else if (check == "latala") {
      nlohmann::json arr = nlohmann::json::array();
      bool pass = true;
      for (const std::int64_t S : s_grid) {
        RegimeSpec s = spec;
        s.S = S;
        const VerificationReport rep = latala_ratio(s, replicates, cap);
        pass = pass && rep.pass;
        arr.push_back(rep.to_json());
      }
      write_json_file(config.out_dir / "verify_latala.json", arr);
      outputs.push_back("verify_latala.json");
      all_pass = all_pass && pass;
      summary.push_back({{"check", "latala_ratio"}, {"file", "verify_latala.json"}, {"pass", pass}});
    } else if (check == "mcar_contraction") {
      emit(mcar_contraction_surrogate(s_grid, spec.rho, spec.kappa, replicates, vc, config.seed,
                                      vj.value("norm_cap", 0.5), vj.value("confidence", 0.95)),
           "verify_mcar_contraction.json");
    } else if (check == "bounded_contraction") {
      emit(bounded_contraction_surrogate(spec.S, spec.rho, spec.kappa, spec.upsilon, replicates,
                                         vc, config.seed, vj.value("slack", 0.05),
                                         vj.value("confidence", 0.95)),
           "verify_bounded_contraction.json");
    } else if (check == "balanced_contraction") {
      emit(balanced_contraction_surrogate(spec.S, spec.rho, spec.kappa, spec.upsilon,
                                          spec.eps_target, replicates, vc, config.seed,
                                          vj.value("delta", 0.01), vj.value("confidence", 0.95)),
           "verify_balanced_contraction.json");
    } else if (check == "norm_vs_s") {
      const auto table = norm_vs_S_experiment(spec.rho, spec.kappa, spec.upsilon, s_grid,
                                              replicates, vc, config.seed);
      write_norm_table_csv(config.out_dir / "norm_table.csv", table);
      outputs.push_back("norm_table.csv");
      summary.push_back({{"check", "norm_vs_s"}, {"file", "norm_table.csv"}, {"pass", true}});
    } else {
      throw std::runtime_error("config: unknown verify check '" + check + "'");
    }
  }
  summary.push_back({{"all_pass", all_pass}});
  write_json_file(config.out_dir / "verify_summary.json", summary);
  outputs.push_back("verify_summary.json");
  return all_pass ? 0 : 2;
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  std::vector<std::string> outputs;
  int status = 0;
  try {
    if (config.command == "simulate") {
      cmd_simulate(config, outputs);
    } else if (config.command == "sample") {
      cmd_sample(config, outputs);
    } else if (config.command == "analyze") {
      cmd_analyze(config, outputs);
    } else if (config.command == "diagnose") {
      cmd_diagnose(config, outputs);
    } else if (config.command == "verify") {
      status = cmd_verify(config, outputs);
    } else {
      throw std::runtime_error("unknown command '" + config.command + "'");
    }
  } catch (const std::exception& e) {
    nlohmann::json err = {{"command", config.command}, {"error", e.what()}};
    write_json_file(config.out_dir / "error_report.json", err);
    return 1;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json manifest = {{"command", config.command},
                             {"seed", config.seed},
                             {"config_hash", fnv1a(config.raw.dump())},
                             {"config", config.raw},
                             {"artifact_version", kArtifactVersion},
                             {"wall_time_seconds", wall},
                             {"outputs", outputs}};
  write_json_file(config.out_dir / "manifest.json", manifest);
  return status;
}

}  // namespace crossed
