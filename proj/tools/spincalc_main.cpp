#include "spincalc/classes.hpp"
#include "spincalc/jsonio.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

namespace {

using namespace spincalc;

/// Everything a command run depends on.  Two runs with equal configurations
/// print byte-identical documents.
struct CommandConfig {
  std::string class_name;
  std::string input_path;
  int g = 0;
  int n = 0;
  int n_max = 0;
  std::string parity;  // "odd", "even", or empty for unpointed moduli of curves
  std::uint64_t seed = 0;
  std::uint64_t p = 10007;
  bool rationals = false;
  long long height_bound = 10000;
  std::string case_name;
  std::string out_path;
};

/// Print the document to stdout and mirror the same bytes to --out if given.
int emit(const CommandConfig& cfg, const Json& doc, int code) {
  std::string text = dump_document(doc);
  std::cout << text;
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw UsageError("cannot open \"" + cfg.out_path + "\" for writing");
    out << text;
  }
  return code;
}

SpaceKind kind_from_parity(const std::string& parity) {
  return parity == "odd" ? SpaceKind::SpinOdd : SpaceKind::SpinEven;
}

Space make_space(const CommandConfig& cfg) {
  Space sp;
  sp.kind = cfg.parity.empty() ? SpaceKind::ModuliCurves : kind_from_parity(cfg.parity);
  sp.g = cfg.g;
  sp.n = cfg.n;
  validate_space(sp);
  return sp;
}

int run_class(const CommandConfig& cfg) {
  static const std::set<std::string> combination_terms = {
      "mu*(theta-null)", "theta-pointed",  "mu*(z)",
      "sigma*(slope)",   "pi*(symmetrized-logan)", "psi-average",
      "weighted-tangency-2-2-3"};
  Space sp = make_space(cfg);
  DivisorClass cls = cfg.class_name == "canonical" ? canonical_class(sp)
                     : combination_terms.count(cfg.class_name)
                         ? term_class(cfg.class_name, sp)
                         : named_class(cfg.class_name, sp);
  return emit(cfg, divisor_to_json(cls), 0);
}

int run_solve_theta(const CommandConfig& cfg) {
  return emit(cfg, theta_report_to_json(solve_theta_coefficients(cfg.g)), 0);
}

int run_certify(const CommandConfig& cfg) {
  Certificate cert;
  if (!cfg.case_name.empty()) {
    cert = verify_bespoke(cfg.case_name);
  } else {
    if (cfg.g == 0 || cfg.parity.empty())
      throw UsageError("certify needs either --case or --g/--n/--parity");
    cert = certify_general_type(make_space(cfg), true);
  }
  return emit(cfg, certificate_to_json(cert), cert.verdict ? 0 : 2);
}

int run_scan(const CommandConfig& cfg) {
  if (cfg.parity.empty()) throw UsageError("scan needs --parity odd or even");
  ScanResult res = threshold_scan(cfg.g, kind_from_parity(cfg.parity), cfg.n_max);
  return emit(cfg, scan_to_json(res), 0);
}

int run_sample(const CommandConfig& cfg) {
  if (cfg.rationals) {
    try {
      SpinDatum<RatField> d =
          sample_spin4(RatField{}, cfg.seed, 20, cfg.height_bound);
      return emit(cfg, datum_to_json(d), d.report.all_pass ? 0 : 2);
    } catch (const ExtensionRequired& ex) {
      // No rational point on the restriction conic within the height bound:
      // rerun the same seed over the quadratic extension that has one.
      QuadExt<RatField> ext(RatField{}, Rat(ex.d));
      SpinDatum<QuadExt<RatField>> d =
          sample_spin4(ext, cfg.seed, 20, cfg.height_bound);
      return emit(cfg, datum_to_json(d), d.report.all_pass ? 0 : 2);
    }
  }
  SpinDatum<PrimeField> d = sample_spin4(PrimeField(cfg.p), cfg.seed);
  return emit(cfg, datum_to_json(d), d.report.all_pass ? 0 : 2);
}

int run_verify(const CommandConfig& cfg) {
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw UsageError("cannot open \"" + cfg.input_path + "\"");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  std::string schema;
  if (doc.is_object() && doc.contains("schema") && doc.at("schema").is_string())
    schema = doc.at("schema").get<std::string>();
  if (schema == "spin-datum/1") {
    AnyDatum any = datum_from_json(doc);
    return std::visit(
        [&](auto& d) {
          d.report = verify_spin_datum(d);
          return emit(cfg, datum_to_json(d), d.report.all_pass ? 0 : 2);
        },
        any);
  }
  if (schema == "certificate/1") {
    Certificate cert = certificate_from_json(doc);
    bool consistent = verify_certificate(cert);
    return emit(cfg, certificate_to_json(cert), consistent ? 0 : 2);
  }
  throw UsageError("no verifier for schema \"" + schema + "\"");
}

int run_selftest(const CommandConfig& cfg) {
  Json checks = Json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass) {
    Json row;
    row["name"] = name;
    row["pass"] = pass;
    checks.push_back(row);
    all = all && pass;
  };

  add("theta-coefficients-genus-4", solve_theta_coefficients(4).matches_expected);
  add("theta-coefficients-genus-12", solve_theta_coefficients(12).matches_expected);
  {
    TestCurve k3 = test_curve("k3_pencil", 11);
    bool zeros = intersect(k3, canonical_class(k3.space)) == 0 &&
                 intersect(k3, term_class("sigma*(slope)", k3.space)) == 0 &&
                 intersect(k3, term_class("mu*(z)", k3.space)) == 0;
    add("k3-pencil-intersections-vanish-genus-11", zeros);
  }
  add("even-scan-genus-5-first-pass-at-7",
      threshold_scan(5, SpaceKind::SpinEven, 12).first_pass == 7);
  {
    Certificate cert = certify_general_type(Space{SpaceKind::SpinOdd, 4, 12, false}, true);
    add("odd-threshold-certificate-genus-4-n-12", cert.verdict);
    add("certificate-reverification", verify_certificate(cert));
    add("certificate-json-round-trip",
        verify_certificate(certificate_from_json(certificate_to_json(cert))));
  }
  {
    bool ok = true;
    for (const auto& name : bespoke_case_names()) ok = ok && verify_bespoke(name).verdict;
    add("bespoke-decompositions", ok);
  }
  add("lp-reconstruction-genus-8-n-5", reconstruct_odd(8, 5).pass);
  {
    SpinDatum<PrimeField> d = sample_spin4(PrimeField(10007), 42);
    add("sample-seed-42-prime-field", d.report.all_pass);
    AnyDatum back = datum_from_json(datum_to_json(d));
    bool round = std::visit([](auto& d2) { return verify_spin_datum(d2).all_pass; }, back);
    add("datum-json-round-trip", round);
  }

  Json doc;
  doc["schema"] = "selftest/1";
  doc["checks"] = checks;
  doc["all_pass"] = all;
  return emit(cfg, doc, all ? 0 : 2);
}

}  // namespace

int main(int argc, char** argv) {
  CommandConfig cfg;
  CLI::App app{"exact divisor-class calculus and spin-curve sampling"};
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", cfg.out_path, "also write the document to this file");
  };

  CLI::App* c_class = app.add_subcommand(
      "class", "print a divisor class in the standard basis");
  c_class->add_option("name", cfg.class_name, "class name, e.g. canonical or theta_gn")
      ->required();
  c_class->add_option("--g", cfg.g, "genus")->required();
  c_class->add_option("--n", cfg.n, "number of marked points");
  c_class->add_option("--parity", cfg.parity, "spin parity; omit for moduli of curves")
      ->check(CLI::IsMember({"odd", "even"}));
  add_out(c_class);

  CLI::App* c_theta = app.add_subcommand(
      "solve-theta", "solve for the pointed theta-divisor coefficients");
  c_theta->add_option("--g", cfg.g, "genus")->required();
  add_out(c_theta);

  CLI::App* c_certify = app.add_subcommand(
      "certify", "certify the canonical class big (or a bespoke decomposition)");
  c_certify->add_option("--g", cfg.g, "genus");
  c_certify->add_option("--n", cfg.n, "number of marked points");
  c_certify->add_option("--parity", cfg.parity, "spin parity")
      ->check(CLI::IsMember({"odd", "even"}));
  CLI::Option* case_opt = c_certify->add_option(
      "--case", cfg.case_name, "bespoke decomposition: s73_plus, s84_minus, s93_minus, s111_minus");
  case_opt->excludes("--g")->excludes("--n")->excludes("--parity");
  add_out(c_certify);

  CLI::App* c_scan = app.add_subcommand(
      "scan", "scan marking counts for the bigness threshold");
  c_scan->add_option("--g", cfg.g, "genus")->required();
  c_scan->add_option("--parity", cfg.parity, "spin parity")
      ->required()
      ->check(CLI::IsMember({"odd", "even"}));
  c_scan->add_option("--n-max", cfg.n_max, "largest marking count to scan")->required();
  add_out(c_scan);

  CLI::App* c_sample = app.add_subcommand(
      "sample-spin4", "sample a two-nodal plane quintic carrying an odd genus-4 spin structure");
  c_sample->add_option("--seed", cfg.seed, "deterministic sampling seed")->required();
  CLI::Option* p_opt =
      c_sample->add_option("--p", cfg.p, "odd prime field characteristic (default 10007)");
  CLI::Option* rat_opt = c_sample->add_flag(
      "--rationals", cfg.rationals, "sample over the rationals (or a quadratic extension)");
  p_opt->excludes(rat_opt);
  rat_opt->excludes(p_opt);
  c_sample->add_option("--height-bound", cfg.height_bound,
                       "rational point search bound before passing to an extension")
      ->check(CLI::PositiveNumber);
  add_out(c_sample);

  CLI::App* c_verify = app.add_subcommand(
      "verify", "re-verify a spin-datum or certificate document");
  c_verify->add_option("path", cfg.input_path, "JSON document to verify")->required();
  add_out(c_verify);

  CLI::App* c_selftest = app.add_subcommand("selftest", "run the internal check battery");
  add_out(c_selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << dump_document(error_to_json("usage", e.what()));
    return 4;
  }

  try {
    if (*c_class) return run_class(cfg);
    if (*c_theta) return run_solve_theta(cfg);
    if (*c_certify) return run_certify(cfg);
    if (*c_scan) return run_scan(cfg);
    if (*c_sample) return run_sample(cfg);
    if (*c_verify) return run_verify(cfg);
    if (*c_selftest) return run_selftest(cfg);
  } catch (const GenericityError& e) {
    std::cout << dump_document(error_to_json("genericity", e.what()));
    return 3;
  } catch (const UsageError& e) {
    std::cout << dump_document(error_to_json("usage", e.what()));
    return 4;
  } catch (const std::exception& e) {
    std::cout << dump_document(error_to_json("internal", e.what()));
    return 1;
  }
  return 0;
}
