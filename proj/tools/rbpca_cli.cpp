// Command-line front end: data generation, model fitting, streaming
// monitoring, benchmarks and kernel-approximation diagnostics.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/eval.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/model_io.hpp"
#include "rbpca/rng.hpp"

namespace {

using namespace rbpca;

std::string out_path(const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  if (const char* dir = std::getenv("RBPCA_OUT_DIR")) {
    std::filesystem::create_directories(dir);
    return std::string(dir) + "/" + name;
  }
  return name;
}

std::optional<double> parse_width(const std::string& text) {
  if (text.empty() || text == "median" || text == "median-heuristic") return std::nullopt;
  try {
    const double v = std::stod(text);
    if (!(v > 0.0)) throw ConfigError("c must be positive, got " + text);
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("c must be a positive number or 'median-heuristic', got '" + text + "'");
  }
}

struct CommonFlags {
  std::string method = "static";
  int m = 150;
  double p = 0.05;
  std::string c_text = "median-heuristic";
  double alpha = 0.99;
  int l = 2;
  int w = 500;
  double delta_level = 0.8;
  std::string mw_policy = "dissimilar";
  std::uint64_t seed = 0;

  RunConfig to_config() const {
    RunConfig cfg;
    cfg.method = method_from_name(method);
    if (m < 1) throw ConfigError("m must be >= 1, got " + std::to_string(m));
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0,1), got " + std::to_string(p));
    if (!(alpha > 0.0 && alpha < 1.0))
      throw ConfigError("alpha must lie in (0,1), got " + std::to_string(alpha));
    if (l < 0) throw ConfigError("l must be >= 0, got " + std::to_string(l));
    if (w < 2) throw ConfigError("w must be >= 2, got " + std::to_string(w));
    if (!(delta_level > 0.0 && delta_level < 1.0))
      throw ConfigError("delta-level must lie in (0,1), got " + std::to_string(delta_level));
    cfg.m = m;
    cfg.p = p;
    cfg.c = parse_width(c_text);
    cfg.alpha = alpha;
    cfg.l = l;
    cfg.w = w;
    cfg.delta_level = delta_level;
    if (mw_policy == "recent") cfg.mw_policy = WindowPolicy::kRecent;
    else if (mw_policy == "dissimilar") cfg.mw_policy = WindowPolicy::kDissimilar;
    else throw ConfigError("mw-policy must be 'dissimilar' or 'recent', got '" + mw_policy + "'");
    cfg.seed = seed;
    return cfg;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--method", flags.method,
                  "static|dynamic|2d|moving-window|kpca-baseline|rpca-fourier");
  cmd->add_option("--m", flags.m, "number of random features");
  cmd->add_option("--p", flags.p, "Bernoulli probability in (0,1)");
  cmd->add_option("--c", flags.c_text, "kernel width, or 'median-heuristic'");
  cmd->add_option("--alpha", flags.alpha, "confidence level of the Q control limit");
  cmd->add_option("--l", flags.l, "time lag (dynamic / 2d)");
  cmd->add_option("--w", flags.w, "moving-window width");
  cmd->add_option("--delta-level", flags.delta_level, "quantile level of the update threshold");
  cmd->add_option("--mw-policy", flags.mw_policy, "window selection: dissimilar|recent");
  cmd->add_option("--seed", flags.seed, "RNG seed");
}

SampleStream resolve_stream(const std::string& csv, const std::string& label_column, int gen_n,
                            std::uint64_t gen_seed, int gen_fault, int gen_start) {
  if (!csv.empty()) {
    std::optional<std::string> label;
    if (!label_column.empty()) label = label_column;
    return load_labeled_csv(csv, label);
  }
  if (gen_n <= 0) throw ConfigError("either a CSV path or --gen-n is required");
  SampleStream s = gen_numerical_example(gen_n, gen_seed);
  if (gen_fault == 1) s = inject_fault1(s, gen_start);
  else if (gen_fault == 2) s = inject_fault2(s, gen_start);
  return s;
}

int cmd_gen(int n, std::uint64_t seed, const std::string& fault, int start,
            const std::string& out) {
  SampleStream stream = gen_numerical_example(n, seed);
  if (fault == "fault1") stream = inject_fault1(stream, start);
  else if (fault == "fault2") stream = inject_fault2(stream, start);
  else if (fault != "none") throw ConfigError("fault must be none|fault1|fault2, got '" + fault + "'");
  const std::string path = out_path(out);
  save_csv(path, stream);
  std::cout << "wrote " << stream.size() << " samples (D=" << stream.dim() << ") to " << path
            << "\n";
  return 0;
}

double self_alarm_rate(const AnyModel& model) {
  const Eigen::VectorXd* qs = nullptr;
  double ucl = 0.0;
  if (const auto* det = std::get_if<Detector>(&model)) {
    qs = &det->train_q;
    ucl = det->q_ucl;
  } else if (const auto* twod = std::get_if<TwoDModel>(&model)) {
    qs = &twod->train_q;
    ucl = twod->q_ucl;
  } else if (const auto* mw = std::get_if<MovingWindowState>(&model)) {
    qs = &mw->detector.train_q;
    ucl = mw->detector.q_ucl;
  } else {
    const auto& kpca = std::get<KpcaModel>(model);
    qs = &kpca.train_q;
    ucl = kpca.q_ucl;
  }
  if (qs->size() == 0) return 0.0;
  return static_cast<double>((qs->array() > ucl).count()) / static_cast<double>(qs->size());
}

int cmd_fit(const CommonFlags& flags, const std::string& train_csv,
            const std::string& label_column, int gen_n, std::uint64_t gen_seed,
            const std::string& out) {
  const RunConfig cfg = flags.to_config();
  const SampleStream train = resolve_stream(train_csv, label_column, gen_n, gen_seed, 0, 0);

  const auto start = std::chrono::steady_clock::now();
  const AnyModel model = fit_model(cfg, train.samples);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string path = out_path(out);
  save_model(path, model, cfg);

  int a = 0;
  double ucl = 0.0;
  if (const auto* det = std::get_if<Detector>(&model)) { a = det->pca.a; ucl = det->q_ucl; }
  else if (const auto* twod = std::get_if<TwoDModel>(&model)) { a = twod->a; ucl = twod->q_ucl; }
  else if (const auto* mw = std::get_if<MovingWindowState>(&model)) { a = mw->detector.pca.a; ucl = mw->detector.q_ucl; }
  else { const auto& k = std::get<KpcaModel>(model); a = k.a; ucl = k.q_ucl; }

  std::printf("method            %s\n", method_name(cfg.method).c_str());
  std::printf("training samples  %ld (D=%ld)\n", static_cast<long>(train.size()),
              static_cast<long>(train.dim()));
  std::printf("retained PCs      %d\n", a);
  std::printf("q_ucl             %.6g\n", ucl);
  std::printf("self-alarm rate   %.4f\n", self_alarm_rate(model));
  std::printf("modeling time     %.3f s\n", seconds);
  std::printf("model file        %s\n", path.c_str());
  return 0;
}

int cmd_monitor(const std::string& model_path, const std::string& stream_csv,
                const std::string& label_column, int gen_n, std::uint64_t gen_seed,
                int gen_fault, int gen_start, const std::string& out) {
  LoadedModel loaded = load_model(model_path);
  const SampleStream stream =
      resolve_stream(stream_csv, label_column, gen_n, gen_seed, gen_fault, gen_start);

  StreamMonitor monitor(std::move(loaded.model));
  const std::string path = out_path(out);
  std::ofstream csv(path);
  if (!csv) throw DataError("cannot write '" + path + "'");
  csv << "index,q,threshold,alarm,label,warming,updated\n";

  // running tallies keep memory independent of the stream length
  long warming = 0, alarms = 0, fault_total = 0, fault_hits = 0, normal_total = 0,
       normal_hits = 0;
  char buf[160];
  for (Eigen::Index k = 0; k < stream.size(); ++k) {
    const StepRecord rec = monitor.feed(stream.samples.col(k));
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%d,", static_cast<long>(k + 1), rec.q,
                  rec.threshold, rec.alarm ? 1 : 0);
    csv << buf;
    if (stream.has_labels()) csv << stream.labels[k];
    csv << ',' << (rec.warming ? 1 : 0) << ',' << (rec.updated ? 1 : 0) << '\n';
    csv.flush();  // usable on live-appended files
    if (rec.warming) {
      ++warming;
      continue;
    }
    alarms += rec.alarm;
    if (stream.has_labels()) {
      if (stream.labels[k]) {
        ++fault_total;
        fault_hits += rec.alarm;
      } else {
        ++normal_total;
        normal_hits += rec.alarm;
      }
    }
  }

  std::printf("samples           %ld (%ld warming)\n", static_cast<long>(stream.size()), warming);
  std::printf("alarms            %ld\n", alarms);
  if (stream.has_labels()) {
    if (fault_total > 0)
      std::printf("FDR               %.4f\n", static_cast<double>(fault_hits) / fault_total);
    else
      std::printf("FDR               n/a (no fault samples)\n");
    if (normal_total > 0)
      std::printf("FAR               %.4f\n", static_cast<double>(normal_hits) / normal_total);
  }
  if (monitor.update_count() > 0 || std::holds_alternative<MovingWindowState>(monitor.model()))
    std::printf("window updates    %ld\n", monitor.update_count());
  std::printf("report            %s\n", path.c_str());
  return 0;
}

int cmd_bench(int n_train, int n_test, const std::vector<std::string>& methods, int runs,
              int replicates, int fault, int fault_start, std::uint64_t seed,
              const std::string& out_prefix) {
  if (fault != 0 && (fault_start < 1 || fault_start > n_test))
    throw ConfigError("fault-start must lie in [1, test-n], got " + std::to_string(fault_start));
  std::vector<Method> ms;
  for (const auto& name : methods) ms.push_back(method_from_name(name));

  const std::vector<BenchRow> rows = bench_modeling(ms, n_train, n_test, seed, runs);
  const std::string timing_path = out_path(out_prefix + "_timing.csv");
  {
    std::ofstream csv(timing_path);
    csv << "method,modeling_seconds,online_seconds_per_sample\n";
    char buf[160];
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g\n", row.method.c_str(),
                    row.modeling_seconds, row.online_seconds_per_sample);
      csv << buf;
    }
  }
  std::printf("%-16s %14s %18s\n", "method", "MT (s)", "OT (s/sample)");
  for (const auto& row : rows)
    std::printf("%-16s %14.6f %18.9f\n", row.method.c_str(), row.modeling_seconds,
                row.online_seconds_per_sample);

  const std::string acc_path = out_path(out_prefix + "_accuracy.csv");
  std::ofstream acc(acc_path);
  acc << "method,replicates,fault,fdr_mean,fdr_std,far_mean,far_std\n";
  std::printf("\n%-16s %10s %10s   (fault %d, %d replicates)\n", "method", "FDR", "FAR", fault,
              replicates);
  for (Method m : ms) {
    NumericalExperiment exp;
    exp.config.method = m;
    exp.config.seed = seed;
    exp.n_train = n_train;
    exp.n_test = n_test;
    exp.fault = fault;
    exp.fault_start = fault_start;
    if (m == Method::kMovingWindow) exp.config.mw_policy = WindowPolicy::kRecent;
    const MonteCarloSummary s = monte_carlo(exp, replicates);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.6g,%.6g,%.6g,%.6g\n", method_name(m).c_str(),
                  replicates, fault, s.fdr.mean, s.fdr.stddev, s.far.mean, s.far.stddev);
    acc << buf;
    std::printf("%-16s %10.4f %10.4f\n", method_name(m).c_str(), s.fdr.mean, s.far.mean);
  }
  std::printf("\ntables: %s, %s\n", timing_path.c_str(), acc_path.c_str());
  return 0;
}

int cmd_approx_error(int n, std::vector<int> m_list, double p, const std::string& c_text,
                     std::uint64_t seed, int seeds, const std::string& out) {
  if (n > 2000) throw ConfigError("approx-error: n must be <= 2000 (dense exact kernel)");
  if (n < 2) throw ConfigError("approx-error: n must be >= 2");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0,1)");

  const SampleStream data = gen_numerical_example(n, derive_seed(seed, 21));
  const Normalizer norm = zscore_fit(data.samples);
  const Eigen::MatrixXd Xn = norm.apply(data.samples);
  const std::optional<double> c_opt = parse_width(c_text);
  const double c = c_opt ? *c_opt : median_heuristic(Xn, derive_seed(seed, 0x6D65));
  const Eigen::MatrixXd K = exact_gaussian_kernel(Xn, GaussianKernelParams(c));

  const std::string path = out_path(out);
  std::ofstream csv(path);
  csv << "m,median_error,max_error,theorem1_bound\n";
  std::printf("n=%d  c=%.6g  ||K||=%.6g\n", n, c, spectral_error(K, Eigen::MatrixXd::Zero(n, n)));
  std::printf("%8s %14s %14s %16s\n", "m", "median err", "max err", "bound");
  for (int m : m_list) {
    if (m < 1) throw ConfigError("approx-error: m must be >= 1");
    std::vector<double> errs;
    for (int s = 0; s < seeds; ++s) {
      const auto map = BernoulliFeatureMap::make(static_cast<int>(Xn.rows()), m, p, c,
                                                 derive_seed(seed, 100 + s));
      errs.push_back(spectral_error(approx_kernel(map.embed_batch(Xn)), K));
    }
    std::sort(errs.begin(), errs.end());
    const double med = errs.size() % 2 ? errs[errs.size() / 2]
                                       : 0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]);
    const double mx = errs.back();
    char buf[160];
    if (m >= 2) {
      const double bound = theorem1_bound(n, m);
      std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,%.6g\n", m, med, mx, bound);
      std::printf("%8d %14.6g %14.6g %16.6g\n", m, med, mx, bound);
    } else {  // the bound needs m >= 2; mark it absent
      std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,\n", m, med, mx);
      std::printf("%8d %14.6g %14.6g %16s\n", m, med, mx, "-");
    }
    csv << buf;
  }
  std::printf("table: %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Bernoulli PCA process monitoring"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file; command-line flags win");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a numerical-example CSV");
  int gen_n = 1000;
  std::uint64_t gen_seed = 0;
  std::string gen_fault = "none";
  int gen_start = 201;
  std::string gen_out = "data.csv";
  gen->add_option("--n", gen_n, "sample count");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--fault", gen_fault, "none|fault1|fault2");
  gen->add_option("--start", gen_start, "1-based fault start index");
  gen->add_option("--out", gen_out, "output CSV path");

  // fit
  auto* fit = app.add_subcommand("fit", "fit a monitor on NOC training data");
  CommonFlags fit_flags;
  add_common_flags(fit, fit_flags);
  std::string fit_train, fit_label, fit_out = "model.json";
  int fit_gen_n = 0;
  std::uint64_t fit_gen_seed = 1;
  fit->add_option("--train", fit_train, "training CSV path");
  fit->add_option("--label-column", fit_label, "label column name to strip");
  fit->add_option("--gen-n", fit_gen_n, "generate training data instead (sample count)");
  fit->add_option("--gen-seed", fit_gen_seed, "generator seed");
  fit->add_option("--out", fit_out, "model file path");

  // monitor
  auto* mon = app.add_subcommand("monitor", "stream samples through a fitted model");
  std::string mon_model, mon_stream, mon_label, mon_out = "report.csv";
  int mon_gen_n = 0, mon_gen_fault = 0, mon_gen_start = 201;
  std::uint64_t mon_gen_seed = 2;
  mon->add_option("--model", mon_model, "model file")->required();
  mon->add_option("--stream", mon_stream, "stream CSV path");
  mon->add_option("--label-column", mon_label, "label column name");
  mon->add_option("--gen-n", mon_gen_n, "generate the stream instead (sample count)");
  mon->add_option("--gen-seed", mon_gen_seed, "generator seed");
  mon->add_option("--gen-fault", mon_gen_fault, "0|1|2");
  mon->add_option("--gen-start", mon_gen_start, "1-based fault start index");
  mon->add_option("--out", mon_out, "per-sample report CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "timing and accuracy comparison");
  int bench_n = 1000, bench_test = 500, bench_runs = 5, bench_reps = 50, bench_fault = 1;
  int bench_fault_start = 201;
  std::uint64_t bench_seed = 0;
  std::vector<std::string> bench_methods{"static", "rpca-fourier", "kpca-baseline"};
  std::string bench_out = "bench";
  bench->add_option("--n", bench_n, "training sample count");
  bench->add_option("--test-n", bench_test, "test stream length");
  bench->add_option("--methods", bench_methods, "methods to compare")->delimiter(',');
  bench->add_option("--runs", bench_runs, "timing runs (median reported)");
  bench->add_option("--replicates", bench_reps, "Monte Carlo replicates for accuracy");
  bench->add_option("--fault", bench_fault, "fault for the accuracy table (0|1|2)");
  bench->add_option("--fault-start", bench_fault_start, "1-based fault start in the test stream");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--out", bench_out, "output file prefix");

  // approx-error
  auto* approx = app.add_subcommand("approx-error", "kernel approximation error vs m");
  int ae_n = 200, ae_seeds = 20;
  std::vector<int> ae_m{200, 800, 4000};
  double ae_p = 0.05;
  std::string ae_c = "median-heuristic", ae_out = "approx_error.csv";
  std::uint64_t ae_seed = 0;
  approx->add_option("--n", ae_n, "sample count (<= 2000)");
  approx->add_option("--m-list", ae_m, "feature counts")->delimiter(',');
  approx->add_option("--p", ae_p, "Bernoulli probability");
  approx->add_option("--c", ae_c, "kernel width or 'median-heuristic'");
  approx->add_option("--seeds", ae_seeds, "seeds per m");
  approx->add_option("--seed", ae_seed, "base seed");
  approx->add_option("--out", ae_out, "output CSV");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_n, gen_seed, gen_fault, gen_start, gen_out);
    if (fit->parsed())
      return cmd_fit(fit_flags, fit_train, fit_label, fit_gen_n, fit_gen_seed, fit_out);
    if (mon->parsed())
      return cmd_monitor(mon_model, mon_stream, mon_label, mon_gen_n, mon_gen_seed,
                         mon_gen_fault, mon_gen_start, mon_out);
    if (bench->parsed())
      return cmd_bench(bench_n, bench_test, bench_methods, bench_runs, bench_reps, bench_fault,
                       bench_fault_start, bench_seed, bench_out);
    if (approx->parsed())
      return cmd_approx_error(ae_n, ae_m, ae_p, ae_c, ae_seed, ae_seeds, ae_out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // --help exits 0, parse failures nonzero
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
