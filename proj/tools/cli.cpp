#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wcf/cheat_search.hpp"
#include "wcf/protocol.hpp"
#include "wcf/tree_eval.hpp"
#include "wcf/tuner.hpp"

namespace wcf::cli {

namespace {

using nlohmann::json;

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Flags shared by every command that takes a parameter vector.
struct ParamFlags {
  int n = 0;
  std::string a;
  std::string a_file;
  double c = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "number of coin-determining messages")->required();
    auto* a_opt = cmd->add_option("--a", a, "weights a_1..a_n, comma separated");
    auto* f_opt = cmd->add_option("--a-file", a_file, "file holding the weights");
    a_opt->excludes(f_opt);
    cmd->add_option("--c", c, "target honest probability that Bob wins")->capture_default_str();
  }

  ProtocolParams params() const {
    std::string text = a;
    if (!a_file.empty()) {
      std::ifstream in(a_file);
      if (!in) throw InvalidArgument("cannot read --a-file '" + a_file + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    } else if (a.empty()) {
      throw InvalidArgument("one of --a or --a-file is required");
    }
    ProtocolParams p{n, parse_real_list(text), c};
    p.validate();
    return p;
  }
};

struct Output {
  std::string format = "json";
  std::string path;

  void attach(CLI::App* cmd, const std::string& default_format) {
    format = default_format;
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", path, "write the result to this file instead of stdout");
  }

  void emit(const std::string& text, std::ostream& out) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    f << text;
  }
};

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json bound_json(int n, const BoundReport& b) {
  return {{"n", n}, {"alpha", b.alpha}, {"beta", b.beta}, {"constraint", b.constraint}, {"bias_bound", b.bias_bound}};
}

json report_json(const CertReport& r) {
  json j = {{"accepted", r.accepted},
            {"domination_margin", r.domination_margin},
            {"support_contained", r.support_contained},
            {"balance_residual", r.balance_residual},
            {"tree_match_residual", r.tree_match_residual},
            {"diagnostic", r.diagnostic}};
  j["psd_min_eig"] = r.psd_min_eig ? json(*r.psd_min_eig) : json(nullptr);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AscentRule parse_rule(const std::string& s) {
  if (s == "seesaw") return AscentRule::SeeSaw;
  if (s == "hill") return AscentRule::HillClimb;
  throw InvalidArgument("rule must be seesaw or hill, got '" + s + "'");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::size_t i = 0;
  const auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i]) && text[i] != ',') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ',') ++j;
    std::string tok = text.substr(i, j - i);
    while (!tok.empty() && is_sep(tok.back())) tok.pop_back();
    if (tok.empty() && j < text.size()) throw InvalidArgument("empty entry in weight list");
    if (!tok.empty()) {
      // A token may still hold whitespace-separated numbers (file input).
      std::istringstream words(tok);
      std::string w;
      while (words >> w) {
        double v = 0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size())
          throw InvalidArgument("malformed number '" + w + "' in weight list");
        out.push_back(v);
      }
    }
    i = j + 1;
  }
  return out;
}

json certificate_to_json(const DualCertificate& cert, const CertReport& report) {
  const auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"n", cert.params.n},
          {"a", cert.params.a},
          {"c", cert.params.c},
          {"side", std::string(1, side_char(cert.side))},
          {"s", vec(cert.s.d)},
          {"z", vec(cert.z.d)},
          {"K", cert.K},
          {"bound", cert.bound},
          {"report", report_json(report)}};
}

DualCertificate certificate_from_json(const json& doc) {
  try {
    DualCertificate cert;
    cert.params.n = doc.at("n").get<int>();
    cert.params.a = doc.at("a").get<std::vector<double>>();
    cert.params.c = doc.value("c", 0.5);
    cert.params.validate();
    cert.side = parse_side(doc.at("side").get<std::string>());
    const auto to_diag = [&](const char* key) {
      const auto v = doc.at(key).get<std::vector<double>>();
      return DiagonalOperator(cert.params.n, Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    cert.s = to_diag("s");
    cert.z = to_diag("z");
    cert.K = doc.at("K").get<double>();
    cert.bound = doc.at("bound").get<double>();
    side_vector(cert.params, cert.side, &cert.honest_probability);
    cert.instance_n = cert.params.n;
    return cert;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed certificate document: ") + e.what());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak coin flipping: bounds, certificates, parameter search and cheating search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wcf 1.0");

  // bounds
  ParamFlags bp;
  Output bo;
  auto* bounds_cmd = app.add_subcommand("bounds", "alpha, beta, constraint and bias bound for given weights");
  bp.attach(bounds_cmd);
  bo.attach(bounds_cmd, "json");

  // optimize
  TuneConfig tc;
  Output oo;
  auto* opt_cmd = app.add_subcommand("optimize", "minimize max(alpha, beta) under the fairness constraint");
  opt_cmd->add_option("--n", tc.n, "number of messages (>= 2)")->required();
  opt_cmd->add_option("--restarts", tc.restarts, "random restarts")->capture_default_str();
  opt_cmd->add_option("--max-evals", tc.max_evals, "evaluation budget per simplex run")->capture_default_str();
  opt_cmd->add_option("--seed", tc.seed, "random seed")->capture_default_str();
  opt_cmd->add_option("--tol", tc.tol, "simplex tolerance")->capture_default_str();
  opt_cmd->add_option("--c", tc.c, "target honest probability that Bob wins")->capture_default_str();
  oo.attach(opt_cmd, "json");

  // sweep
  int n_max = 100;
  std::string parity = "even";
  Output so;
  auto* sweep_cmd = app.add_subcommand("sweep", "bounds along a_k = 1/k (even n) or 1/(k+1) (odd n)");
  sweep_cmd->add_option("--n-max", n_max, "largest n")->capture_default_str();
  sweep_cmd->add_option("--parity", parity, "even or odd")->check(CLI::IsMember({"even", "odd"}))->capture_default_str();
  so.attach(sweep_cmd, "csv");

  // verify-cert
  ParamFlags vp;
  std::string side_str = "B", export_path, cert_path;
  Output vo;
  auto* cert_cmd = app.add_subcommand("verify-cert", "build and verify the dual certificate for one side");
  cert_cmd->add_option("--n", vp.n, "number of messages");
  cert_cmd->add_option("--a", vp.a, "weights a_1..a_n, comma separated");
  cert_cmd->add_option("--a-file", vp.a_file, "file holding the weights");
  cert_cmd->add_option("--c", vp.c, "target honest probability that Bob wins")->capture_default_str();
  cert_cmd->add_option("--side", side_str, "cheating side, A or B")->capture_default_str();
  cert_cmd->add_option("--export", export_path, "write the certificate document here");
  cert_cmd->add_option("--cert", cert_path, "re-verify a certificate document instead of building one");
  vo.attach(cert_cmd, "json");

  // simulate
  ParamFlags mp;
  long runs = 100000;
  std::uint64_t sim_seed = 1;
  Output mo;
  auto* sim_cmd = app.add_subcommand("simulate", "sample honest protocol runs");
  mp.attach(sim_cmd);
  sim_cmd->add_option("--runs", runs, "number of runs")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "first seed; run r uses seed + r")->capture_default_str();
  mo.attach(sim_cmd, "json");

  // cheat
  ParamFlags cp;
  std::string cheat_side = "B", rule = "seesaw";
  int ancilla = 2, iters = 500;
  std::uint64_t cheat_seed = 1;
  Output co;
  auto* cheat_cmd = app.add_subcommand("cheat", "local ascent over cheating strategies for one side");
  cp.attach(cheat_cmd);
  cheat_cmd->add_option("--side", cheat_side, "cheating side, A or B")->capture_default_str();
  cheat_cmd->add_option("--ancilla", ancilla, "ancilla qubits")->capture_default_str();
  cheat_cmd->add_option("--iters", iters, "ascent iterations")->capture_default_str();
  cheat_cmd->add_option("--seed", cheat_seed, "random seed")->capture_default_str();
  cheat_cmd->add_option("--rule", rule, "seesaw or hill")->check(CLI::IsMember({"seesaw", "hill"}))->capture_default_str();
  co.attach(cheat_cmd, "json");

  // gap
  ParamFlags gp;
  GapConfig gc;
  Output go;
  auto* gap_cmd = app.add_subcommand("gap", "ascent lower bounds against dual upper bounds for both sides");
  gp.attach(gap_cmd);
  gap_cmd->add_option("--ancilla", gc.ancilla_qubits, "ancilla qubits")->capture_default_str();
  gap_cmd->add_option("--iters", gc.iters, "ascent iterations")->capture_default_str();
  gap_cmd->add_option("--seed", gc.seed, "random seed")->capture_default_str();
  go.attach(gap_cmd, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  try {
    if (*bounds_cmd) {
      const ProtocolParams p = bp.params();
      const BoundReport b = bounds(p);
      if (bo.format == "csv") {
        bo.emit("n,alpha,beta,constraint,bias_bound\n" + std::to_string(p.n) + "," + fmt12(b.alpha) + "," +
                    fmt12(b.beta) + "," + fmt12(b.constraint) + "," + fmt12(b.bias_bound) + "\n",
                out);
      } else {
        bo.emit(json_text(bound_json(p.n, b)), out);
      }
      return kOk;
    }

    if (*opt_cmd) {
      const TuneResult r = optimize_bias(tc);
      const double constraint = eval_constraint_fast(r.params);
      if (oo.format == "csv") {
        std::string a;
        for (double x : r.params.a) a += (a.empty() ? "" : " ") + fmt17(x);
        oo.emit("n,alpha,beta,bias,constraint,a\n" + std::to_string(r.params.n) + "," + fmt17(r.alpha) + "," +
                    fmt17(r.beta) + "," + fmt17(r.bias) + "," + fmt17(constraint) + "," + a + "\n",
                out);
      } else {
        oo.emit(json_text({{"n", r.params.n},
                           {"a", r.params.a},
                           {"c", r.params.c},
                           {"alpha", r.alpha},
                           {"beta", r.beta},
                           {"bias", r.bias},
                           {"constraint", constraint},
                           {"alpha_beta_residual", r.alpha_beta_residual},
                           {"evals", r.evals}}),
                out);
      }
      return kOk;
    }

    if (*sweep_cmd) {
      const auto rows = parity == "even" ? sweep_reciprocal(n_max) : sweep_reciprocal_odd(n_max);
      if (so.format == "csv") {
        std::string text = "n,alpha,beta\n";
        for (const auto& r : rows) text += std::to_string(r.n) + "," + fmt12(r.alpha) + "," + fmt12(r.beta) + "\n";
        so.emit(text, out);
      } else {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back({{"n", r.n}, {"alpha", r.alpha}, {"beta", r.beta}, {"constraint", r.constraint}});
        so.emit(json_text(arr), out);
      }
      return kOk;
    }

    if (*cert_cmd) {
      DualCertificate cert;
      if (!cert_path.empty()) {
        cert = certificate_from_json(json::parse(read_file(cert_path)));
      } else {
        if (vp.n == 0) throw InvalidArgument("--n is required unless --cert is given");
        cert = build_certificate(vp.params(), parse_side(side_str));
      }
      const CertReport rep = verify_certificate(cert);
      const json doc = certificate_to_json(cert, rep);
      if (!export_path.empty()) {
        std::ofstream f(export_path, std::ios::binary);
        if (!f) throw InvalidArgument("cannot write '" + export_path + "'");
        f << doc.dump(2) << "\n";
      }
      vo.emit(json_text({{"n", cert.params.n},
                         {"side", std::string(1, side_char(cert.side))},
                         {"bound", cert.bound},
                         {"K", cert.K},
                         {"report", report_json(rep)}}),
              out);
      if (!rep.accepted) {
        err << "certificate rejected: " << rep.diagnostic << "\n";
        return kRejected;
      }
      return kOk;
    }

    if (*sim_cmd) {
      const ProtocolParams p = mp.params();
      if (runs < 1) throw InvalidArgument("--runs must be positive");
      const HonestSimulator sim(p);
      long bob = 0, disagree = 0, failed = 0;
      for (long r = 0; r < runs; ++r) {
        const Transcript t = sim.run(sim_seed + static_cast<std::uint64_t>(r));
        bob += t.alice_outcome == 1 ? 1 : 0;
        disagree += t.alice_outcome != t.bob_outcome ? 1 : 0;
        failed += t.verification_passed ? 0 : 1;
      }
      const double freq = static_cast<double>(bob) / static_cast<double>(runs);
      const double constraint = eval_constraint_fast(p);
      if (mo.format == "csv") {
        mo.emit("runs,bob_wins,bob_frequency,constraint,disagreements,verification_failures\n" + std::to_string(runs) +
                    "," + std::to_string(bob) + "," + fmt12(freq) + "," + fmt12(constraint) + "," +
                    std::to_string(disagree) + "," + std::to_string(failed) + "\n",
                out);
      } else {
        mo.emit(json_text({{"runs", runs},
                           {"bob_wins", bob},
                           {"bob_frequency", freq},
                           {"constraint", constraint},
                           {"disagreements", disagree},
                           {"verification_failures", failed}}),
                out);
      }
      return kOk;
    }

    if (*cheat_cmd) {
      const ProtocolParams p = cp.params();
      const Side side = parse_side(cheat_side);
      const AscentResult r = ascend(p, side, ancilla, iters, cheat_seed, parse_rule(rule));
      const BoundReport b = bounds_at_constraint(p);
      const double bound = side == Side::B ? b.beta : b.alpha;
      const bool dominated = r.max_evaluated <= bound + 1e-9;
      if (co.format == "csv") {
        co.emit("side,value,bound,max_evaluated,iterations,dominated\n" + std::string(1, side_char(side)) + "," +
                    fmt12(r.value) + "," + fmt12(bound) + "," + fmt12(r.max_evaluated) + "," +
                    std::to_string(r.iterations) + "," + (dominated ? "true" : "false") + "\n",
                out);
      } else {
        co.emit(json_text({{"side", std::string(1, side_char(side))},
                           {"value", r.value},
                           {"bound", bound},
                           {"max_evaluated", r.max_evaluated},
                           {"iterations", r.iterations},
                           {"dominated", dominated}}),
                out);
      }
      return kOk;
    }

    if (*gap_cmd) {
      const auto rows = gap_report(gp.params(), gc);
      if (go.format == "csv") {
        std::string text = "side,lower,upper,gap\n";
        for (const auto& r : rows)
          text += std::string(1, side_char(r.side)) + "," + fmt12(r.lower) + "," + fmt12(r.upper) + "," + fmt12(r.gap) + "\n";
        go.emit(text, out);
      } else {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"side", std::string(1, side_char(r.side))}, {"lower", r.lower}, {"upper", r.upper}, {"gap", r.gap}});
        go.emit(json_text(arr), out);
      }
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const DegenerateCertificate& e) {
    err << "degenerate certificate: " << e.what() << "\n";
    return kRejected;
  } catch (const DegenerateProtocol& e) {
    err << "degenerate protocol: " << e.what() << "\n";
    return kRejected;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kValidation;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("wcf");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace wcf::cli
