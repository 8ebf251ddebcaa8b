// chnorm: generate, convert and measure finite-dimensional quantum channels.
//
// Subcommands: gen, norm, conjugate, convert, verify. Channels travel as JSON
// (see channel_to_json); exit codes are 0 success / all-pass, 1 verification
// failure, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "chnorm/json_io.hpp"

namespace {

using namespace chnorm;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CHNORM_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

QuantumChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file '" + path + "'");
  json j;
  in >> j;
  return channel_from_json(j);
}

void print_table_estimate(const NormEstimate& est) {
  std::cout << "value              " << std::setprecision(12) << est.value << "\n"
            << "converged          " << (est.converged ? "true" : "false") << "\n"
            << "restarts_agreeing  " << est.restarts_agreeing << "\n";
}

void print_table_report(const VerificationReport& rep) {
  std::cout << "identity: " << rep.identity_name << "  (seed " << rep.seed << ")\n";
  std::cout << std::left << std::setw(40) << "instance" << std::setw(6) << "p" << std::setw(6)
            << "q" << std::setw(14) << "lhs" << std::setw(14) << "rhs" << std::setw(12)
            << "rel_diff" << std::setw(10) << "tol" << "result\n";
  for (const auto& i : rep.instances) {
    std::cout << std::left << std::setw(40) << i.channel << std::setw(6) << i.p << std::setw(6)
              << i.q << std::setw(14) << std::setprecision(6) << i.lhs << std::setw(14) << i.rhs
              << std::setw(12) << std::scientific << std::setprecision(2) << i.rel_diff
              << std::setw(10) << i.tolerance << std::defaultfloat
              << (i.passed ? "pass" : "FAIL") << "\n";
  }
  std::cout << "summary: " << rep.passed() << "/" << rep.total() << " passed, max rel diff "
            << std::scientific << std::setprecision(3) << rep.max_rel_diff() << std::defaultfloat
            << ", " << std::setprecision(2) << rep.wall_time_s << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum channel norms and identity verification"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a channel as JSON on stdout");
  std::string gen_name;
  int gen_din = 2, gen_dout = 2, gen_kappa = 1, gen_d = 2;
  double gen_lambda = 1.0, gen_t = 0.0;
  std::vector<double> gen_probs;
  std::uint64_t gen_seed = default_seed();
  gen->add_option("--name", gen_name,
                  "named channel: identity|trace|depolarize|dephase|transpose_depolarize|weyl_covariant");
  gen->add_option("--din", gen_din, "input dimension (random channels)");
  gen->add_option("--dout", gen_dout, "output dimension (random channels)");
  gen->add_option("--kappa", gen_kappa, "number of Kraus operators (random channels)");
  gen->add_option("--d", gen_d, "dimension for named channels");
  gen->add_option("--lambda", gen_lambda, "depolarizing parameter");
  gen->add_option("--t", gen_t, "dephasing strength");
  gen->add_option("--probs", gen_probs, "weyl_covariant probabilities (d^2 values)");
  gen->add_option("--seed", gen_seed, "random seed (default: CHNORM_SEED or 0)");

  // norm
  auto* norm = app.add_subcommand("norm", "compute a channel norm");
  std::string norm_file, norm_q = "2", norm_p = "2", norm_format = "table";
  bool norm_omega = false;
  std::string norm_method = "choi";
  OptimizerConfig opt;
  norm->add_option("file", norm_file, "channel JSON file")->required();
  norm->add_option("--q", norm_q, "input Schatten index (number or 'inf')");
  norm->add_option("--p", norm_p, "output Schatten index (number or 'inf')");
  norm->add_flag("--omega", norm_omega, "compute omega_p instead of the q->p norm");
  norm->add_option("--method", norm_method, "omega estimator: choi|pure");
  norm->add_option("--restarts", opt.restarts, "optimizer restarts");
  norm->add_option("--max-iters", opt.max_iters, "ascent iterations per restart");
  std::uint64_t norm_seed = default_seed();
  norm->add_option("--seed", norm_seed, "optimizer seed");
  norm->add_option("--format", norm_format, "output format: table|json");

  // conjugate
  auto* conj = app.add_subcommand("conjugate", "emit the conjugate channel as JSON");
  std::string conj_file;
  conj->add_option("file", conj_file, "channel JSON file")->required();

  // convert
  auto* conv = app.add_subcommand("convert", "emit a representation of a channel");
  std::string conv_file, conv_to = "choi";
  conv->add_option("file", conv_file, "channel JSON file")->required();
  conv->add_option("--to", conv_to, "target view: kraus|choi|stinespring");

  // verify
  auto* ver = app.add_subcommand("verify", "run an identity verification suite");
  std::string ver_name, ver_format = "table";
  bool ver_quick = false;
  SuiteOptions sopts;
  ver->add_option("identity", ver_name,
                  "lemma1|theorem2|multiplicativity|trace-tensor|king|all")
      ->required();
  ver->add_flag("--quick", ver_quick, "reduced instance counts");
  std::uint64_t ver_seed = default_seed();
  ver->add_option("--seed", ver_seed, "suite seed");
  ver->add_option("--restarts", sopts.opt.restarts, "optimizer restarts");
  ver->add_option("--max-iters", sopts.opt.max_iters, "ascent iterations per restart");
  ver->add_option("--format", ver_format, "output format: table|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      QuantumChannel ch =
          gen_name.empty()
              ? random_channel(gen_din, gen_dout, gen_kappa, gen_seed)
              : named_channel(gen_name, NamedChannelParams{gen_d, gen_lambda, gen_t, gen_probs});
      std::optional<std::string> name =
          gen_name.empty() ? std::nullopt : std::optional<std::string>(gen_name);
      std::optional<std::uint64_t> seed =
          gen_name.empty() ? std::optional<std::uint64_t>(gen_seed) : std::nullopt;
      std::cout << channel_to_json(ch, name, seed).dump(2) << "\n";
      return 0;
    }
    if (norm->parsed()) {
      QuantumChannel ch = load_channel(norm_file);
      opt.seed = norm_seed;
      PNorm p = pnorm_from_string(norm_p);
      NormEstimate est;
      if (norm_omega) {
        if (norm_method == "pure")
          est = omega_p_pure(ch, p, opt);
        else if (norm_method == "choi")
          est = omega_p_choi(ch, p, opt);
        else
          throw std::invalid_argument("unknown --method '" + norm_method + "'");
      } else {
        est = norm_q_to_p(ch, pnorm_from_string(norm_q), p, opt);
      }
      if (norm_format == "json")
        std::cout << estimate_to_json(est).dump(2) << "\n";
      else
        print_table_estimate(est);
      return 0;
    }
    if (conj->parsed()) {
      QuantumChannel ch = load_channel(conj_file);
      std::cout << channel_to_json(conjugate(ch)).dump(2) << "\n";
      return 0;
    }
    if (conv->parsed()) {
      QuantumChannel ch = load_channel(conv_file);
      if (conv_to == "kraus") {
        std::cout << channel_to_json(ch).dump(2) << "\n";
      } else if (conv_to == "choi") {
        ChoiMatrix x = choi_from_channel(ch);
        json j{{"d_in", x.d_in}, {"d_out", x.d_out}, {"choi", matrix_to_json(x.matrix)}};
        std::cout << j.dump(2) << "\n";
      } else if (conv_to == "stinespring") {
        StinespringIsometry v = stinespring_from_kraus(ch);
        json j{{"d_in", v.d_in},
               {"d_out", v.d_out},
               {"kappa", v.kappa},
               {"V", matrix_to_json(v.v)}};
        std::cout << j.dump(2) << "\n";
      } else {
        throw std::invalid_argument("unknown --to '" + conv_to + "'");
      }
      return 0;
    }
    if (ver->parsed()) {
      sopts.seed = ver_seed;
      sopts.quick = ver_quick;
      std::vector<VerificationReport> reports;
      auto want = [&](const std::string& n) { return ver_name == n || ver_name == "all"; };
      if (want("lemma1")) reports.push_back(verify_lemma1(sopts));
      if (want("theorem2")) reports.push_back(verify_theorem2(sopts));
      if (want("multiplicativity")) reports.push_back(verify_multiplicativity(sopts));
      if (want("trace-tensor")) reports.push_back(verify_trace_tensor(sopts));
      if (want("king")) reports.push_back(verify_king_lemma(sopts));
      if (reports.empty())
        throw std::invalid_argument("unknown identity '" + ver_name + "'");
      bool all_ok = true;
      if (ver_format == "json") {
        json out = json::array();
        for (const auto& r : reports) out.push_back(report_to_json(r));
        std::cout << out.dump(2) << "\n";
      }
      for (const auto& r : reports) {
        if (ver_format != "json") print_table_report(r);
        all_ok = all_ok && r.all_passed();
      }
      return all_ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
