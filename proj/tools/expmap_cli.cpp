// Command-line driver.
//
//   expmap coeffs --max-degree N [--format csv|json] [--out PATH]
//   expmap eval|verify|lemma2|convergence --config FILE [--seed S] [--steps K] [--out PATH]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "expmap/commands.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<int> max_degree;
  std::optional<int> n;
  std::optional<double> tolerance;
  std::string out_path;
  std::string format;
};

expmap::RunConfig load_config(const CommonOptions& o) {
  std::ifstream in(o.config_path);
  if (!in) throw expmap::InvalidInput("cannot open config file '" + o.config_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw expmap::InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (o.seed) j["seed"] = *o.seed;
  if (o.steps) j["steps"] = *o.steps;
  if (o.max_degree) j["max_degree"] = *o.max_degree;
  if (o.n) j["n"] = *o.n;
  if (o.tolerance) j["tolerance"] = *o.tolerance;
  if (!o.format.empty()) j["format"] = o.format;
  return expmap::config_from_json(j);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw expmap::InvalidInput("cannot write '" + out_path + "'");
  out << text;
}

std::string convergence_csv(const nlohmann::json& artifact) {
  std::ostringstream os;
  os << "t,distance\n";
  for (const auto& row : artifact.at("rows")) os << row.at("t").get<double>() << ',' << row.at("distance").get<double>() << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Taylor series of the transported differential of the exponential map"};
  app.require_subcommand(1);

  int coeff_degree = 6;
  std::string coeff_format = "csv";
  std::string coeff_out;
  auto* coeffs = app.add_subcommand("coeffs", "Exact coefficient table of the series");
  coeffs->add_option("--max-degree", coeff_degree, "Largest list degree (0..12)")->required();
  coeffs->add_option("--format", coeff_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  coeffs->add_option("--out", coeff_out, "Output path (default stdout)");

  CommonOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
    sub->add_option("--seed", opts.seed, "Override the polynomial connection seed");
    sub->add_option("--steps", opts.steps, "RK4 steps on [0,1]");
    sub->add_option("--max-degree", opts.max_degree, "Series truncation degree");
    sub->add_option("--tolerance", opts.tolerance, "Pass threshold");
    sub->add_option("--out", opts.out_path, "Output path (default stdout)");
  };
  auto* eval = app.add_subcommand("eval", "Closed-form and recurrence evaluation of E_p(v)");
  auto* verify = app.add_subcommand("verify", "Series against the Jacobi-field oracle");
  auto* lemma2 = app.add_subcommand("lemma2", "Derivatives of the transported curvature");
  auto* convergence = app.add_subcommand("convergence", "Remainder order of the truncated series");
  for (auto* sub : {eval, verify, lemma2, convergence}) add_common(sub);
  lemma2->add_option("--n", opts.n, "Derivative order (0..4); default all");
  convergence->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    expmap::CommandResult result;
    std::string out_path;
    if (coeffs->parsed()) {
      result = expmap::cmd_coeffs(coeff_degree, coeff_format == "json" ? expmap::OutputFormat::json
                                                                        : expmap::OutputFormat::csv);
      out_path = coeff_out;
    } else {
      const expmap::RunConfig cfg = load_config(opts);
      out_path = opts.out_path;
      if (eval->parsed()) result = expmap::cmd_eval(cfg);
      if (verify->parsed()) result = expmap::cmd_verify(cfg);
      if (lemma2->parsed()) result = expmap::cmd_lemma2(cfg);
      if (convergence->parsed()) {
        result = expmap::cmd_convergence(cfg);
        if (cfg.format == expmap::OutputFormat::csv) result.text = convergence_csv(result.artifact);
      }
    }
    if (result.artifact.contains("warnings"))
      for (const auto& w : result.artifact.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << '\n';
    emit(result.text, out_path);
    std::cerr << "verdict: " << (result.pass ? "PASS" : "FAIL") << '\n';
    return result.pass ? kExitPass : kExitFail;
  } catch (const expmap::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const expmap::ChartDomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
