#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ncp/job.hpp"

namespace {

struct CommonArgs {
  std::string spec_path;
  std::string output = "-";
  std::string format = "json";
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--spec", args.spec_path, "JSON file holding the command payload")
      ->check(CLI::ExistingFile);
  sub->add_option("--output", args.output, "result destination; '-' is stdout");
  sub->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

int fail_usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch toolkit for noncommutative Levy process computations"};
  app.require_subcommand(1);

  std::map<std::string, CommonArgs> common;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"cumulants", "convert a moment sequence to cumulants for one flavor"},
      {"convolve", "additive convolution of two moment sequences"},
      {"bp-map", "Bercovici-Pata image of a classical moment sequence"},
      {"mixed-moment", "mixed moment of independent families (tensor or free)"},
      {"fock-oracle", "vacuum expectation of an operator word on the free Fock space"},
      {"levy-moments", "cumulants and moments of a generator tuple at time t"},
      {"classify", "gaussian / compound-poisson / general classification of a tuple"},
      {"ito-split", "decompose a tuple into gaussian and jump parts"},
      {"minimal", "minimal realization of a generator tuple"},
      {"azema", "free Azema martingale moments from the discrete flow"},
      {"check", "run the cross-module consistency suite"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    add_common(sub, common[name]);
  }

  std::string cumulants_flavor;
  std::vector<double> cumulants_m;
  {
    CLI::App* sub = app.get_subcommand("cumulants");
    sub->add_option("--flavor", cumulants_flavor, "classical, free, or boolean");
    sub->add_option("--m", cumulants_m, "moments m_1,m_2,...")->delimiter(',');
  }

  std::string convolve_flavor;
  std::vector<double> convolve_m1;
  std::vector<double> convolve_m2;
  {
    CLI::App* sub = app.get_subcommand("convolve");
    sub->add_option("--flavor", convolve_flavor, "classical, free, or boolean");
    sub->add_option("--m1", convolve_m1, "first moment sequence")->delimiter(',');
    sub->add_option("--m2", convolve_m2, "second moment sequence")->delimiter(',');
  }

  std::vector<double> bp_m;
  app.get_subcommand("bp-map")
      ->add_option("--m", bp_m, "classical moment sequence")
      ->delimiter(',');

  double azema_gamma_re = 0.0;
  double azema_gamma_im = 0.0;
  double azema_t = 0.0;
  int azema_steps = 0;
  int azema_depth = 0;
  int azema_max_order = 0;
  bool azema_converge = false;
  {
    CLI::App* sub = app.get_subcommand("azema");
    sub->add_option("--gamma-re", azema_gamma_re, "real part of the conservation coefficient");
    sub->add_option("--gamma-im", azema_gamma_im, "imaginary part of the conservation coefficient");
    sub->add_option("--t", azema_t, "total time");
    sub->add_option("--steps", azema_steps, "number of discretization steps");
    sub->add_option("--depth", azema_depth, "Fock truncation depth");
    sub->add_option("--max-order", azema_max_order, "highest moment order to report");
    sub->add_flag("--converge", azema_converge, "also emit the step-refinement table");
  }

  std::string check_filter;
  double check_perturbation = 0.0;
  {
    CLI::App* sub = app.get_subcommand("check");
    sub->add_option("--filter", check_filter, "run only checks whose name contains this substring");
    sub->add_option("--inject-perturbation", check_perturbation,
                    "add this amount to every observed deviation (negative control)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const CommonArgs& args = common[name];

  ncp::Json payload = ncp::Json::object();
  if (!args.spec_path.empty()) {
    std::ifstream in(args.spec_path);
    if (!in) return fail_usage("cannot open spec file '" + args.spec_path + "'");
    try {
      payload = ncp::Json::parse(in);
    } catch (const std::exception& e) {
      return fail_usage("spec file '" + args.spec_path + "' is not valid JSON: " + e.what());
    }
    if (!payload.is_object()) {
      return fail_usage("spec file '" + args.spec_path + "' must hold a JSON object");
    }
  }

  if (name == "cumulants") {
    if (sub->count("--flavor")) payload["flavor"] = cumulants_flavor;
    if (sub->count("--m")) payload["m"] = cumulants_m;
  } else if (name == "convolve") {
    if (sub->count("--flavor")) payload["flavor"] = convolve_flavor;
    if (sub->count("--m1")) payload["m1"] = convolve_m1;
    if (sub->count("--m2")) payload["m2"] = convolve_m2;
  } else if (name == "bp-map") {
    if (sub->count("--m")) payload["m"] = bp_m;
  } else if (name == "azema") {
    if (sub->count("--gamma-re")) payload["gamma_re"] = azema_gamma_re;
    if (sub->count("--gamma-im")) payload["gamma_im"] = azema_gamma_im;
    if (sub->count("--t")) payload["t"] = azema_t;
    if (sub->count("--steps")) payload["steps"] = azema_steps;
    if (sub->count("--depth")) payload["depth"] = azema_depth;
    if (sub->count("--max-order")) payload["max_order"] = azema_max_order;
    if (sub->count("--converge")) payload["converge"] = azema_converge;
  } else if (name == "check") {
    if (sub->count("--filter")) payload["filter"] = check_filter;
    if (sub->count("--inject-perturbation")) payload["inject_perturbation"] = check_perturbation;
  }

  const auto start = std::chrono::steady_clock::now();
  const ncp::JobOutcome outcome = ncp::run_job({name, std::move(payload), args.format});
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  if (!outcome.body.empty()) {
    if (args.output == "-") {
      std::cout << outcome.body;
    } else {
      std::ofstream out(args.output);
      if (!out) return fail_usage("cannot open output file '" + args.output + "'");
      out << outcome.body;
    }
  }
  if (!outcome.message.empty()) std::cerr << "error: " << outcome.message << "\n";
  std::cerr << "elapsed: " << elapsed.count() << " s\n";
  return outcome.exit_code;
}
