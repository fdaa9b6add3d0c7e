#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hdgmm/io.hpp"
#include "hdgmm/parallel.hpp"

namespace {

using namespace hdgmm;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError(out_path + ": cannot open for writing");
  out << text;
}

struct CommonOpts {
  std::string x_path, z_path, y_path, null_path, out_path;
  std::string format = "csv";
  double alpha = 0.05;
  Index cv_folds = 5;
  Index grid_size = 50;
  unsigned threads = 0;
};

int run_infer(const CommonOpts& opt, bool fit_only) {
  const Matrix X = read_matrix_csv(opt.x_path);
  const Matrix Z = read_matrix_csv(opt.z_path);
  const Vector Y = read_vector_csv(opt.y_path);
  if (X.rows() != Z.rows() || X.rows() != Y.size())
    throw DimensionMismatch("row counts disagree: X has " +
                            std::to_string(X.rows()) + ", Z has " +
                            std::to_string(Z.rows()) + ", Y has " +
                            std::to_string(Y.size()));

  CvConfig cv;
  cv.folds = opt.cv_folds;
  std::cerr << "running two-step Lasso-GMM (K=" << cv.folds
            << ", grid=" << opt.grid_size << ")...\n";
  const PipelineResult pipe =
      two_step_pipeline(X, Z, Y, cv, opt.grid_size);

  if (fit_only) {
    std::ostringstream out;
    out << "j,beta_first,beta_second\n";
    for (Index j = 0; j < X.cols(); ++j)
      out << (j + 1) << "," << format_double(pipe.first_fit.beta(j)) << ","
          << format_double(pipe.second_fit.beta(j)) << "\n";
    out << "# lambda_first=" << format_double(pipe.lambda_first)
        << " lambda_second=" << format_double(pipe.lambda_second) << "\n";
    emit(out.str(), opt.out_path);
    return 0;
  }

  std::cerr << "solving CLIME rows...\n";
  const SigmaHat sigma = sigma_hat(X, Z, pipe.W);
  const ClimeResult gamma = clime_full(sigma);
  const Vector b_hat = debias(pipe.second_fit.beta, gamma, X, Z, pipe.W, Y);
  const VarianceEstimate var =
      variance_estimate(X, Z, pipe.W, pipe.first_fit.residuals);
  const Vector variances = coordinate_variances(gamma, var);

  std::optional<Vector> nulls;
  if (!opt.null_path.empty()) {
    nulls = read_vector_csv(opt.null_path);
    if (nulls->size() != X.cols())
      throw DimensionMismatch("null vector has " +
                              std::to_string(nulls->size()) +
                              " entries, expected " +
                              std::to_string(X.cols()));
  }
  const InferenceResult result = confidence_intervals(
      b_hat, variances, X.rows(), opt.alpha, nulls ? &*nulls : nullptr);

  emit(format_inference(pipe.second_fit.beta, result,
                        parse_format(opt.format)),
       opt.out_path);
  return 0;
}

int run_simulate(const CommonOpts& opt, int design, Index n, Index p, Index q,
                 Index reps, std::uint64_t seed) {
  const DesignSpec spec = DesignSpec::make(design, n, p, q, reps, seed);
  std::cerr << "design " << design << ": n=" << n << " p=" << p << " q=" << q
            << " B=" << reps << " seed=" << seed << "\n";
  const auto start = std::chrono::steady_clock::now();
  const SummaryTable table =
      run_design(spec, resolve_threads(opt.threads), opt.grid_size);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::cerr << "runtime: " << secs << " s\n";
  emit(format_summary(table, parse_format(opt.format)), opt.out_path);
  return 0;
}

int run_panel(const std::string& input, const std::string& out_prefix) {
  const PanelData data = read_panel_csv(input);
  const Index T = data.y.cols();
  const Index K = static_cast<Index>(data.x.size());
  const StackedGmm stacked = panel_to_gmm(data);
  const Index q = panel_instrument_count(T, K);
  std::cout << "T=" << T << " K=" << K << " q=" << q
            << " (lagged-y " << (T - 2) * (T - 1) / 2 << " + exogenous "
            << T * (T - 1) * K << "), stacked n=" << stacked.Y.size() << "\n";
  write_vector_csv(out_prefix + "Y.csv", stacked.Y, "y");
  write_matrix_csv(out_prefix + "X.csv", stacked.X, "x");
  write_matrix_csv(out_prefix + "Z.csv", stacked.Z, "z");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional two-step Lasso-GMM estimation and "
               "debiased inference"};
  app.require_subcommand(1);

  CommonOpts opt;
  int design = 1;
  Index n = 0, p = 0, q = 0, reps = 100;
  std::uint64_t seed = 0;
  std::string panel_input, panel_out;

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--x", opt.x_path, "regressor matrix CSV")->required();
    cmd->add_option("--z", opt.z_path, "instrument matrix CSV")->required();
    cmd->add_option("--y", opt.y_path, "response vector CSV")->required();
    cmd->add_option("--cv-folds", opt.cv_folds, "CV folds K");
    cmd->add_option("--grid-size", opt.grid_size, "lambda grid size");
    cmd->add_option("--out", opt.out_path, "output path (default stdout)");
  };

  auto* infer = app.add_subcommand("infer", "fit, debias and report CIs");
  add_io(infer);
  infer->add_option("--null", opt.null_path, "null-value vector CSV");
  infer->add_option("--alpha", opt.alpha, "CI level");
  infer->add_option("--format", opt.format, "csv|json|markdown");
  infer->add_option("--threads", opt.threads, "worker cap");

  auto* fit = app.add_subcommand("fit", "two-step Lasso-GMM fit only");
  add_io(fit);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo design run");
  sim->add_option("--design", design, "design id 1|2|3")->required();
  sim->add_option("--n", n, "sample size")->required();
  sim->add_option("--p", p, "regressor count")->required();
  sim->add_option("--q", q, "instrument count")->required();
  sim->add_option("--reps", reps, "replications B");
  sim->add_option("--seed", seed, "base seed")->required();
  sim->add_option("--grid-size", opt.grid_size, "lambda grid size");
  sim->add_option("--format", opt.format, "csv|json|markdown");
  sim->add_option("--out", opt.out_path, "output path (default stdout)");
  sim->add_option("--threads", opt.threads, "worker cap");

  auto* panel = app.add_subcommand("panel", "first-difference a dynamic panel");
  panel->add_option("--input", panel_input, "long-format panel CSV")
      ->required();
  panel->add_option("--out", panel_out, "output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0))
      throw InvalidSpec("alpha must be in (0,1)");
    if (infer->parsed()) return run_infer(opt, false);
    if (fit->parsed()) return run_infer(opt, true);
    if (sim->parsed()) return run_simulate(opt, design, n, p, q, reps, seed);
    if (panel->parsed()) return run_panel(panel_input, panel_out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
