#include "gausskey/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gausskey/channel.hpp"
#include "gausskey/engines.hpp"
#include "gausskey/protocol_sim.hpp"
#include "gausskey/rates.hpp"
#include "gausskey/thresholds.hpp"

namespace gausskey::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitDomain = 1;
constexpr int kExitFlags = 2;
constexpr int kDefaultDigits = 12;

// Raised for flag combinations CLI11 cannot express; maps to exit code 2.
struct FlagError {
  std::string message;
};

int output_digits() {
  if (const char* env = std::getenv("GAUSSKEY_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 17) {
      return static_cast<int>(v);
    }
  }
  return kDefaultDigits;
}

class Format {
 public:
  explicit Format(int digits) : digits_(digits) {}

  std::string num(double v) const { return fmt::format("{:.{}g}", v, digits_); }

  // Same digits as `num`, so JSON and text carry identical values.
  Json json(double v) const {
    if (!std::isfinite(v)) {
      return nullptr;
    }
    return std::stod(num(v));
  }

  Json json(const Eigen::Matrix2d& m) const {
    return Json::array({Json::array({json(m(0, 0)), json(m(0, 1))}),
                        Json::array({json(m(1, 0)), json(m(1, 1))})});
  }

 private:
  int digits_;
};

std::string flag_for(const std::string& parameter) {
  static const std::map<std::string, std::string> flags = {
      {"tau", "--tau"},       {"nbar", "--nbar"},   {"eps", "--eps"},   {"mu", "--mu"},
      {"rounds", "--rounds"}, {"steps", "--steps"}, {"tol", "--tol"}, {"mu-list", "--mu-list"},
  };
  const auto it = flags.find(parameter);
  return it != flags.end() ? it->second : parameter;
}

std::ofstream open_output(const std::string& path, const char* flag) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw FlagError{fmt::format("{}: cannot open '{}' for writing", flag, path)};
  }
  return f;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string region_text(const RegionLabel& r) {
  std::string text;
  if (r.e_r_positive) {
    text = "K_rev ≥ E_R > 0";
  } else if (r.r_rev_positive) {
    text = "K_rev ≥ R_rev > E_R = 0";
  } else {
    text = "no positive reverse bound";
  }
  if (r.antidegradable) {
    text = "antidegradable; " + text;
  }
  if (r.q1g_positive) {
    text += "; Q1g > 0";
  }
  return text;
}

void write_svg(std::ostream& os, const ThresholdCurve& curve, const Format& f) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double margin = 50.0;
  double tmin = curve.rows.front().tau;
  double tmax = curve.rows.back().tau;
  double emax = 0.0;
  for (const auto& r : curve.rows) {
    emax = std::max({emax, r.eps_q, r.eps_r, r.eps_rev});
  }
  if (tmax <= tmin) {
    tmax = tmin + 1.0;
  }
  if (emax <= 0.0) {
    emax = 1.0;
  }
  auto px = [&](double tau) { return margin + (tau - tmin) / (tmax - tmin) * (width - 2 * margin); };
  auto py = [&](double eps) { return height - margin - eps / emax * (height - 2 * margin); };

  os << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      width, height, width, height);
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << fmt::format(
      "<path d=\"M{} {} H{} M{} {} V{}\" stroke=\"black\" fill=\"none\"/>\n", margin, height - margin,
      width - margin, margin, height - margin, margin);
  os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">tau [{}, {}]</text>\n", width / 2,
                    height - 15, f.num(tmin), f.num(tmax));
  os << fmt::format("<text x=\"5\" y=\"{}\" font-size=\"12\">eps (max {})</text>\n", margin - 10,
                    f.num(emax));

  struct Series {
    double ThresholdRow::*field;
    const char* name;
    const char* style;
  };
  const Series series[] = {
      {&ThresholdRow::eps_q, "eps_q", "stroke=\"black\" stroke-width=\"1\""},
      {&ThresholdRow::eps_r, "eps_r", "stroke=\"black\" stroke-width=\"2.5\""},
      {&ThresholdRow::eps_rev, "eps_rev", "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\""},
  };
  double legend_y = margin;
  for (const auto& s : series) {
    // Break the polyline across tau = 1.
    std::string d;
    bool pen_down = false;
    double prev_tau = 0.0;
    for (const auto& r : curve.rows) {
      const bool crosses = pen_down && (prev_tau < 1.0) != (r.tau < 1.0);
      d += fmt::format("{}{:.2f} {:.2f} ", (!pen_down || crosses) ? "M" : "L", px(r.tau), py(r.*s.field));
      pen_down = true;
      prev_tau = r.tau;
    }
    os << fmt::format("<path d=\"{}\" fill=\"none\" {}/>\n", d, s.style);
    os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n", width - margin - 60,
                      legend_y, s.name);
    os << fmt::format("<path d=\"M{} {} h30\" {}/>\n", width - margin - 100, legend_y - 4, s.style);
    legend_y += 16;
  }
  os << "</svg>\n";
}

std::vector<std::string> reversed(const std::vector<std::string>& args) {
  return {args.rbegin(), args.rend()};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Format f(output_digits());

  CLI::App app{"Secret-key rate bounds for one-mode Gaussian channels", "gausskey"};
  app.require_subcommand(1);

  double tau = 0.0;
  double nbar = 0.0;
  double eps = 0.0;
  double mu = 0.0;
  bool as_json = false;

  // rates
  auto* rates = app.add_subcommand("rates", "closed-form E_R, Q1g and R_rev at one channel");
  rates->add_option("--tau", tau, "transmission (tau != 1)")->required();
  auto* rates_nbar = rates->add_option("--nbar", nbar, "thermal photons of the environment");
  auto* rates_eps = rates->add_option("--eps", eps, "scaled thermal noise 2 nbar |1-tau|");
  rates_nbar->excludes(rates_eps);
  rates->add_flag("--json", as_json, "emit JSON");

  // thresholds
  double tau_min = 0.05;
  double tau_max = 2.5;
  std::size_t steps = 200;
  double tol = 1e-9;
  std::string out_path;
  std::string svg_path;
  auto* thresholds = app.add_subcommand("thresholds", "threshold curves eps_q, eps_r, eps_rev over tau");
  thresholds->add_option("--tau-min", tau_min, "lower end of the tau grid")->capture_default_str();
  thresholds->add_option("--tau-max", tau_max, "upper end of the tau grid")->capture_default_str();
  thresholds->add_option("--steps", steps, "number of grid points")->capture_default_str();
  thresholds->add_option("--tol", tol, "root-finding tolerance on eps");
  thresholds->add_option("--out", out_path, "CSV output file (standard output if omitted)");
  thresholds->add_option("--svg", svg_path, "also render a minimal SVG plot to this file");

  // converge
  std::vector<double> mu_list;
  std::string engine_name = "rci";
  std::string ports_name = "trusted";
  auto* converge = app.add_subcommand("converge", "finite-mu engines against their closed forms");
  converge->add_option("--tau", tau, "transmission (tau != 1)")->required();
  converge->add_option("--nbar", nbar, "thermal photons of the environment")->required();
  converge->add_option("--mu-list", mu_list, "comma-separated source variances")->required()->delimiter(',');
  converge->add_option("--engine", engine_name, "rci | ci | protocol")
      ->check(CLI::IsMember({"rci", "ci", "protocol"}));
  converge->add_option("--ports", ports_name, "discarded-port model for the protocol engine")
      ->check(CLI::IsMember({"trusted", "untrusted"}));
  converge->add_flag("--json", as_json, "emit JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "dilation-based protocol rate against R_rev");
  verify->add_option("--tau", tau, "transmission (class C: 0 < tau < 1 or tau > 1)")->required();
  verify->add_option("--nbar", nbar, "thermal photons of the environment")->required();
  verify->add_option("--mu", mu, "source variance")->required();
  verify->add_option("--ports", ports_name, "trusted | untrusted")
      ->required()
      ->check(CLI::IsMember({"trusted", "untrusted"}));
  verify->add_flag("--json", as_json, "emit JSON");

  // simulate
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::string mode_name = "memory";
  std::string rounds_csv;
  auto* simulate_cmd = app.add_subcommand("simulate", "seeded Monte Carlo of the homodyne protocol");
  simulate_cmd->add_option("--tau", tau, "transmission (tau != 1)")->required();
  simulate_cmd->add_option("--nbar", nbar, "thermal photons of the environment")->required();
  simulate_cmd->add_option("--mu", mu, "source variance")->required();
  simulate_cmd->add_option("--rounds", rounds, "number of rounds")->required();
  simulate_cmd->add_option("--seed", seed, "64-bit seed")->required();
  simulate_cmd->add_option("--mode", mode_name, "memory | sifted")
      ->required()
      ->check(CLI::IsMember({"memory", "sifted"}));
  simulate_cmd->add_option("--rounds-csv", rounds_csv, "per-round CSV output file");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "region flags at one (tau, eps) point");
  classify_cmd->add_option("--tau", tau, "transmission (tau != 1)")->required();
  classify_cmd->add_option("--eps", eps, "scaled thermal noise")->required();
  classify_cmd->add_flag("--json", as_json, "emit JSON");

  try {
    app.parse(reversed(args));

    if (rates->parsed()) {
      if (rates_nbar->count() + rates_eps->count() != 1) {
        throw FlagError{"--nbar/--eps: exactly one of --nbar or --eps is required"};
      }
      const Noise noise = rates_nbar->count() ? Noise{Nbar{nbar}} : Noise{Eps{eps}};
      const CanonicalChannel ch = make_canonical(tau, noise);
      const RateReport r = rate_report(ch);
      if (as_json) {
        Json j;
        j["tau"] = f.json(r.tau);
        j["nbar"] = f.json(r.nbar);
        j["eps"] = f.json(r.eps);
        j["class"] = std::string(to_string(ch.class_label()));
        j["rank"] = ch.rank();
        j["w"] = f.json(r.w);
        j["lambda"] = f.json(r.lambda);
        j["e_r"] = f.json(r.e_r);
        j["q1g"] = f.json(r.q1g);
        j["r_rev"] = f.json(r.r_rev);
        out << j.dump() << '\n';
      } else {
        out << "tau     " << f.num(r.tau) << '\n'
            << "nbar    " << f.num(r.nbar) << '\n'
            << "eps     " << f.num(r.eps) << '\n'
            << "class   " << to_string(ch.class_label()) << '\n'
            << "rank    " << ch.rank() << '\n'
            << "w       " << f.num(r.w) << '\n'
            << "lambda  " << f.num(r.lambda) << '\n'
            << "E_R     " << f.num(r.e_r) << '\n'
            << "Q1g     " << f.num(r.q1g) << '\n'
            << "R_rev   " << f.num(r.r_rev) << '\n'
            << "bounds  K_rev >= K_rev_distill >= E_R = " << f.num(r.e_r)
            << "; K_rev_distill >= R_rev = " << f.num(r.r_rev) << '\n';
      }
      return 0;
    }

    if (thresholds->parsed()) {
      if (!(tol > 0.0)) {
        throw FlagError{"--tol: must be > 0"};
      }
      const ThresholdCurve curve = sweep(tau_min, tau_max, steps, tol);
      if (out_path.empty()) {
        write_csv(out, curve, output_digits());
      } else {
        auto file = open_output(out_path, "--out");
        write_csv(file, curve, output_digits());
        out << "wrote " << curve.rows.size() << " rows to " << out_path << '\n';
      }
      if (!svg_path.empty()) {
        auto file = open_output(svg_path, "--svg");
        write_svg(file, curve, f);
      }
      for (const auto& row : curve.rows) {
        if (row.flagged) {
          err << "warning: eps_rev at tau=" << f.num(row.tau)
              << " found by scan (non-monotone r_rev interior)\n";
        }
      }
      return 0;
    }

    if (converge->parsed()) {
      const CanonicalChannel ch = make_canonical(tau, Nbar{nbar});
      const Engine engine = engine_name == "rci" ? Engine::rci
                            : engine_name == "ci" ? Engine::ci
                                                  : Engine::protocol;
      const PortModel ports = ports_name == "trusted" ? PortModel::trusted : PortModel::untrusted;
      for (double m : mu_list) {
        if (!(m >= 1.0)) {
          throw Error(ErrorKind::Domain, "mu-list", "every source variance must be >= 1");
        }
      }
      const auto rows = convergence(ch, mu_list, engine, ports);
      if (as_json) {
        Json j;
        j["tau"] = f.json(tau);
        j["nbar"] = f.json(nbar);
        j["engine"] = engine_name;
        if (engine == Engine::protocol) {
          j["ports"] = ports_name;
        }
        j["rows"] = Json::array();
        for (const auto& r : rows) {
          j["rows"].push_back(
              {{"mu", f.json(r.mu)}, {"value", f.json(r.value)}, {"target", f.json(r.target)}, {"gap", f.json(r.gap)}});
        }
        out << j.dump() << '\n';
      } else {
        out << "mu,value,target,gap\n";
        for (const auto& r : rows) {
          out << f.num(r.mu) << ',' << f.num(r.value) << ',' << f.num(r.target) << ',' << f.num(r.gap) << '\n';
        }
      }
      return 0;
    }

    if (verify->parsed()) {
      const CanonicalChannel ch = make_canonical(tau, Nbar{nbar});
      const PortModel ports = ports_name == "trusted" ? PortModel::trusted : PortModel::untrusted;
      const ProtocolRate pq = protocol_rate_numeric(ch, mu, ports, Quadrature::q);
      const ProtocolRate pp = protocol_rate_numeric(ch, mu, ports, Quadrature::p);
      const double closed = r_rev_interior(ch);
      const double diff = std::abs(pq.rate - closed);
      if (as_json) {
        Json j;
        j["tau"] = f.json(tau);
        j["nbar"] = f.json(nbar);
        j["mu"] = f.json(mu);
        j["ports"] = ports_name;
        j["mutual_information"] = f.json(pq.mutual_information);
        j["holevo_eve"] = f.json(pq.holevo_eve);
        j["eve_entropy"] = f.json(pq.eve_entropy);
        j["eve_conditional_entropy"] = f.json(pq.eve_conditional_entropy);
        j["rate_numeric"] = f.json(pq.rate);
        j["rate_numeric_p"] = f.json(pp.rate);
        j["r_rev_interior"] = f.json(closed);
        j["r_rev"] = f.json(r_rev(ch));
        j["abs_diff"] = f.json(diff);
        out << j.dump() << '\n';
      } else {
        out << "ports                    " << ports_name << '\n'
            << "I(x_A:x_B1)              " << f.num(pq.mutual_information) << '\n'
            << "chi(E:x_B1)              " << f.num(pq.holevo_eve) << '\n'
            << "S(E)                     " << f.num(pq.eve_entropy) << '\n'
            << "S(E|x_B1)                " << f.num(pq.eve_conditional_entropy) << '\n'
            << "rate (q basis)           " << f.num(pq.rate) << '\n'
            << "rate (p basis)           " << f.num(pp.rate) << '\n'
            << "closed-form interior     " << f.num(closed) << '\n'
            << "closed-form R_rev        " << f.num(r_rev(ch)) << '\n'
            << "|numeric - closed form|  " << f.num(diff) << '\n';
      }
      return 0;
    }

    if (simulate_cmd->parsed()) {
      SimConfig cfg;
      cfg.tau = tau;
      cfg.nbar = nbar;
      cfg.mu = mu;
      cfg.rounds = rounds;
      cfg.seed = seed;
      cfg.mode = mode_name == "memory" ? SiftMode::memory : SiftMode::sifted;

      std::optional<std::ofstream> csv;
      if (!rounds_csv.empty()) {
        csv = open_output(rounds_csv, "--rounds-csv");
        *csv << "basis_b,basis_a,kept,x_a,x_b\n";
      }
      auto basis = [](Quadrature b) { return b == Quadrature::q ? 'q' : 'p'; };
      std::function<void(const RoundRecord&)> sink;
      if (csv) {
        sink = [&](const RoundRecord& r) {
          *csv << basis(r.basis_b) << ',' << basis(r.basis_a) << ',' << (r.kept ? 1 : 0) << ','
               << f.num(r.x_a) << ',' << f.num(r.x_b) << '\n';
        };
      }
      const SimStats st = simulate(cfg, sink);
      Json j;
      j["kept_rounds"] = st.kept_rounds;
      j["empirical_cov"] = f.json(st.empirical_cov);
      j["analytic_cov"] = f.json(st.analytic_cov);
      j["mi_empirical"] = f.json(st.mi_empirical);
      j["mi_analytic"] = f.json(st.mi_analytic);
      j["sift_ratio"] = f.json(st.sift_ratio);
      j["standard_error"] = f.json(st.standard_error);
      j["empirical_cross_q"] = f.json(st.empirical_cross_q);
      j["empirical_cross_p"] = f.json(st.empirical_cross_p);
      j["analytic_cross_q"] = f.json(st.analytic_cross_q);
      j["analytic_cross_p"] = f.json(st.analytic_cross_p);
      j["metadata"] = {{"tau", f.json(tau)},   {"nbar", f.json(nbar)}, {"mu", f.json(mu)},
                       {"rounds", rounds},     {"seed", seed},         {"mode", mode_name},
                       {"rng", std::string(kRngName)}};
      out << j.dump() << '\n';
      return 0;
    }

    if (classify_cmd->parsed()) {
      const RegionLabel r = classify(tau, eps);
      const CanonicalChannel ch = make_canonical(tau, Eps{eps});
      if (as_json) {
        Json j;
        j["tau"] = f.json(tau);
        j["eps"] = f.json(eps);
        j["nbar"] = f.json(ch.nbar());
        j["antidegradable"] = r.antidegradable;
        j["e_r_positive"] = r.e_r_positive;
        j["q1g_positive"] = r.q1g_positive;
        j["r_rev_positive"] = r.r_rev_positive;
        j["reverse_beats_antidegradability"] = r.reverse_beats_antidegradability;
        j["region"] = region_text(r);
        out << j.dump() << '\n';
      } else {
        out << "tau                              " << f.num(tau) << '\n'
            << "eps                              " << f.num(eps) << '\n'
            << "nbar                             " << f.num(ch.nbar()) << '\n'
            << "antidegradable                   " << yes_no(r.antidegradable) << '\n'
            << "E_R > 0                          " << yes_no(r.e_r_positive) << '\n'
            << "Q1g > 0                          " << yes_no(r.q1g_positive) << '\n'
            << "R_rev > 0                        " << yes_no(r.r_rev_positive) << '\n'
            << "reverse beats antidegradability  " << yes_no(r.reverse_beats_antidegradability) << '\n'
            << "region: " << region_text(r) << '\n';
      }
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    err << e.what() << '\n';
    return kExitFlags;
  } catch (const FlagError& e) {
    err << e.message << '\n';
    return kExitFlags;
  } catch (const Error& e) {
    err << flag_for(e.parameter()) << ": " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitFlags;
}

}  // namespace gausskey::cli
