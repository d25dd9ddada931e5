#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qfree/cli.hpp"

int main(int argc, char** argv) {
  using namespace qfree;
  CLI::App app{"Correlators of entangled operators and their stochastic limit"};

  std::string pattern, state = "fock", mode = "finite", dispersion = "linear";
  std::string numeric_file, csv_path, test_function = "gaussian";
  double beta = 1.0;
  std::size_t max_n = 12, all_n = 0;
  std::uint64_t seed = 0;
  bool json = false;
  std::vector<double> lambdas{0.4, 0.2, 0.1, 0.05};

  app.add_option("--pattern", pattern, "Word: tokens \"a\"/\"a+\", or a JSON array of {op,t,k}");
  app.add_option("--state", state, "fock | gaussian | temperature")->capture_default_str();
  app.add_option("--beta", beta, "Inverse temperature for --state temperature")->capture_default_str();
  app.add_option("--dispersion", dispersion, "linear | quadratic")->capture_default_str();
  app.add_option("--mode", mode,
                 "finite | limit | free | oracle-fock | oracle-double | check-theorem2 | diagrams | "
                 "quadrature")
      ->capture_default_str();
  app.add_option("--max-n", max_n, "Maximum pattern length")->capture_default_str();
  app.add_option("--all-n", all_n, "check-theorem2 over every balanced pattern of this length");
  auto* numeric_opt = app.add_option("--numeric", numeric_file, "JSON numeric assignment file");
  auto* seed_opt = app.add_option("--seed", seed, "Random numeric assignment from this seed");
  numeric_opt->excludes(seed_opt);
  app.add_flag("--json", json, "Emit the report as JSON");
  app.add_option("--csv", csv_path, "Write quadrature rows to this CSV file");
  app.add_option("--lambdas", lambdas, "Quadrature lambda sweep")->capture_default_str();
  app.add_option("--test-function", test_function,
                 "gaussian | anisotropic | shifted | zero")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    cli::JobSpec job;
    job.mode = cli::parse_mode(mode);
    job.state = cli::parse_state(state, beta, cli::parse_dispersion(dispersion));
    job.max_n = max_n;
    if (all_n) job.all_n = all_n;
    if (!pattern.empty()) job.pattern = cli::parse_pattern(pattern);
    if (!numeric_file.empty()) {
      if (!job.pattern) throw cli::UsageError("--numeric needs --pattern");
      job.numeric = cli::load_numeric(numeric_file, job.pattern->symbols);
    } else if (*seed_opt) {
      if (!job.pattern) throw cli::UsageError("--seed needs --pattern");
      job.numeric = cli::random_numeric(job.pattern->word.size(), seed);
    }
    job.json = json;
    job.test_function = test_function;
    job.lambdas = lambdas;

    auto report = cli::run(job);
    std::cout << report.text;
    if (!csv_path.empty()) {
      if (job.mode != cli::Mode::Quadrature) throw cli::UsageError("--csv applies to quadrature mode");
      std::ofstream out(csv_path);
      if (!out) throw cli::UsageError("cannot write '" + csv_path + "'");
      out << report.csv;
    }
    return report.exit_code;
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return 3;
  } catch (const oracle::QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
}
