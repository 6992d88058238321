#include "spincalc/jsonio.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

namespace spincalc {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object())
    throw UsageError(std::string("expected an object carrying \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end())
    throw UsageError(std::string("document is missing required key \"") + key + "\"");
  return *it;
}

void need_schema(const Json& j, const char* schema) {
  const Json& tag = need(j, "schema");
  if (!tag.is_string() || tag.get<std::string>() != schema)
    throw UsageError(std::string("expected a ") + schema + " document");
}

std::string need_string(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_string())
    throw UsageError(std::string("key \"") + key + "\" must hold a string");
  return v.get<std::string>();
}

int need_int(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_integer())
    throw UsageError(std::string("key \"") + key + "\" must hold an integer");
  return v.get<int>();
}

bool need_bool(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_boolean())
    throw UsageError(std::string("key \"") + key + "\" must hold a boolean");
  return v.get<bool>();
}

int parse_small_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("malformed " + what + " \"" + s + "\"");
  }
}

std::string set_label(uint32_t S) {
  std::string out = "{";
  bool first = true;
  for (int k = 1; k <= 32; ++k) {
    if (S & (1u << (k - 1))) {
      if (!first) out += ",";
      out += std::to_string(k);
      first = false;
    }
  }
  return out + "}";
}

uint32_t set_from_label(const std::string& s) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw UsageError("malformed marking set \"" + s + "\"");
  uint32_t S = 0;
  std::string body = s.substr(1, s.size() - 2);
  size_t pos = 0;
  while (pos < body.size()) {
    size_t comma = body.find(',', pos);
    std::string tok =
        body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    int k = parse_small_int(tok, "marking index");
    if (k < 1 || k > 32) throw UsageError("marking index out of range in \"" + s + "\"");
    S |= 1u << (k - 1);
    pos = comma == std::string::npos ? body.size() : comma + 1;
  }
  return S;
}

}  // namespace

// ---------------------------------------------------------------------------
// Labels and small scalars.
// ---------------------------------------------------------------------------

std::string basis_label(const BasisClass& b) {
  switch (b.tag) {
    case Tag::Lambda:
    case Tag::DeltaIrr:
    case Tag::AlphaIrr:
    case Tag::BetaIrr:
      return tag_name(b.tag);
    case Tag::Psi:
      return "psi_" + std::to_string(b.i);
    default:
      return tag_name(b.tag) + "(" + std::to_string(b.i) + ":" + set_label(b.S) + ")";
  }
}

BasisClass basis_from_label(const Space& sp, const std::string& label) {
  if (label == "lambda") return require_class(sp, Tag::Lambda, 0, 0);
  if (label == "delta_irr") return require_class(sp, Tag::DeltaIrr, 0, 0);
  if (label == "alpha_0") return require_class(sp, Tag::AlphaIrr, 0, 0);
  if (label == "beta_0") return require_class(sp, Tag::BetaIrr, 0, 0);
  if (label.rfind("psi_", 0) == 0)
    return require_class(sp, Tag::Psi, parse_small_int(label.substr(4), "marking index"), 0);
  size_t open = label.find('(');
  size_t colon = label.find(':', open == std::string::npos ? 0 : open);
  if (open == std::string::npos || colon == std::string::npos || label.back() != ')')
    throw UsageError("unrecognized basis-class label \"" + label + "\"");
  Tag tag = tag_from_name(label.substr(0, open));
  int i = parse_small_int(label.substr(open + 1, colon - open - 1), "genus index");
  uint32_t S = set_from_label(label.substr(colon + 1, label.size() - colon - 2));
  return require_class(sp, tag, i, S);
}

Json rat_to_json(const Rat& x) {
  const Int num = numerator(x), den = denominator(x);
  static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
  static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
  if (num < lo || num > hi || den < lo || den > hi)
    throw UsageError("rational exceeds the 64-bit num/den encoding: " + x.str());
  Json out;
  out["num"] = num.convert_to<std::int64_t>();
  out["den"] = den.convert_to<std::int64_t>();
  return out;
}

Rat rat_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw UsageError("expected a {num, den} rational");
  const Json& n = j.at("num");
  const Json& d = j.at("den");
  if (!n.is_number_integer() || !d.is_number_integer())
    throw UsageError("rational parts must be integers");
  std::int64_t den = d.get<std::int64_t>();
  if (den == 0) throw UsageError("rational with zero denominator");
  return Rat(Int(n.get<std::int64_t>())) / Rat(Int(den));
}

Rat rat_from_string(const std::string& s) {
  size_t slash = s.find('/');
  Int num, den(1);
  try {
    num = Int(slash == std::string::npos ? s : s.substr(0, slash));
    if (slash != std::string::npos) den = Int(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw UsageError("malformed rational \"" + s + "\"");
  }
  if (den == 0) throw UsageError("rational with zero denominator: \"" + s + "\"");
  return Rat(num) / Rat(den);
}

Json space_to_json(const Space& sp) {
  Json out;
  out["kind"] = kind_name(sp.kind);
  out["g"] = sp.g;
  out["n"] = sp.n;
  out["symmetrized"] = sp.symmetrized;
  return out;
}

Space space_from_json(const Json& j) {
  Space sp;
  sp.kind = kind_from_name(need_string(j, "kind"));
  sp.g = need_int(j, "g");
  sp.n = need_int(j, "n");
  sp.symmetrized = need_bool(j, "symmetrized");
  validate_space(sp);
  return sp;
}

// ---------------------------------------------------------------------------
// Divisor documents.
// ---------------------------------------------------------------------------

Json divisor_to_json(const DivisorClass& cls) {
  Json doc;
  doc["schema"] = "spin-divisor/1";
  doc["space"] = space_to_json(cls.space);
  Json co = Json::object();
  for (const auto& [b, v] : cls.coeffs) co[basis_label(b)] = rat_to_json(v);
  doc["coefficients"] = co;
  if (!cls.tail_bounds.empty()) {
    Json tb = Json::object();
    for (const auto& [b, v] : cls.tail_bounds) tb[basis_label(b)] = rat_to_json(v);
    doc["tail_bounds"] = tb;
  }
  return doc;
}

DivisorClass divisor_from_json(const Json& j) {
  need_schema(j, "spin-divisor/1");
  DivisorClass cls{space_from_json(need(j, "space"))};
  for (const auto& [key, val] : need(j, "coefficients").items())
    cls.add(basis_from_label(cls.space, key), rat_from_json(val));
  if (j.contains("tail_bounds"))
    for (const auto& [key, val] : j.at("tail_bounds").items())
      cls.tail_bounds[basis_from_label(cls.space, key)] = rat_from_json(val);
  return cls;
}

Json theta_report_to_json(const ThetaSolveReport& rep) {
  Json doc;
  doc["schema"] = "theta-solve/1";
  doc["g"] = rep.g;
  doc["unknown_count"] = rep.unknown_count;
  doc["system_rank"] = rep.system_rank;
  doc["consistent"] = rep.consistent;
  doc["unique"] = rep.unique;
  doc["matches_expected"] = rep.matches_expected;
  Json sol = Json::array();
  for (const auto& [name, value] : rep.solution) {
    Json row;
    row["name"] = name;
    row["value"] = rat_to_json(value);
    sol.push_back(row);
  }
  doc["solution"] = sol;
  return doc;
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------

Json certificate_to_json(const Certificate& cert) {
  Json doc;
  doc["schema"] = "certificate/1";
  doc["label"] = cert.label;
  doc["space"] = space_to_json(cert.space);
  doc["claims_general_type"] = cert.claims_general_type;
  Json terms = Json::array();
  for (const auto& t : cert.terms) {
    Json row;
    row["class"] = t.class_name;
    row["coeff"] = rat_to_json(t.coeff);
    terms.push_back(row);
  }
  doc["terms"] = terms;
  doc["lambda_coeff"] = rat_to_json(cert.lambda_coeff);
  doc["psi_coeff"] = rat_to_json(cert.psi_coeff);
  doc["psi_surplus"] = rat_to_json(cert.psi_surplus);
  if (cert.residual) {
    Json res;
    Json w = Json::object(), a = Json::object();
    for (const auto& [b, v] : cert.residual->written) w[basis_label(b)] = rat_to_json(v);
    for (const auto& [b, v] : cert.residual->addition_bounds)
      a[basis_label(b)] = rat_to_json(v);
    res["written"] = w;
    res["addition_bounds"] = a;
    doc["residual"] = res;
  }
  Json checks = Json::array();
  for (const auto& c : cert.checks) {
    Json row;
    row["name"] = c.name;
    row["lhs"] = rat_to_json(c.lhs);
    row["sense"] = c.sense;
    row["rhs"] = rat_to_json(c.rhs);
    row["pass"] = c.pass;
    checks.push_back(row);
  }
  doc["checks"] = checks;
  doc["notes"] = cert.notes;
  doc["verdict"] = cert.verdict;
  return doc;
}

Certificate certificate_from_json(const Json& j) {
  need_schema(j, "certificate/1");
  Certificate cert;
  cert.label = need_string(j, "label");
  cert.space = space_from_json(need(j, "space"));
  cert.claims_general_type = need_bool(j, "claims_general_type");
  for (const auto& t : need(j, "terms"))
    cert.terms.push_back(CertTerm{need_string(t, "class"), rat_from_json(need(t, "coeff"))});
  cert.lambda_coeff = rat_from_json(need(j, "lambda_coeff"));
  cert.psi_coeff = rat_from_json(need(j, "psi_coeff"));
  cert.psi_surplus = rat_from_json(need(j, "psi_surplus"));
  if (j.contains("residual")) {
    const Json& res = j.at("residual");
    ResidualClass r;
    r.space = cert.space;
    r.space.symmetrized = false;
    for (const auto& [key, val] : need(res, "written").items())
      r.written[basis_from_label(r.space, key)] = rat_from_json(val);
    for (const auto& [key, val] : need(res, "addition_bounds").items())
      r.addition_bounds[basis_from_label(r.space, key)] = rat_from_json(val);
    cert.residual = std::move(r);
  }
  for (const auto& c : need(j, "checks")) {
    // Rows are carried verbatim; re-evaluation is verify_certificate's job.
    cert.checks.push_back(Inequality{need_string(c, "name"), rat_from_json(need(c, "lhs")),
                                     need_string(c, "sense"), rat_from_json(need(c, "rhs")),
                                     need_bool(c, "pass")});
  }
  for (const auto& nt : need(j, "notes")) {
    if (!nt.is_string()) throw UsageError("notes must be strings");
    cert.notes.push_back(nt.get<std::string>());
  }
  cert.verdict = need_bool(j, "verdict");
  return cert;
}

// ---------------------------------------------------------------------------
// Scan results.
// ---------------------------------------------------------------------------

Json scan_to_json(const ScanResult& res) {
  Json doc;
  doc["schema"] = "scan/1";
  doc["g"] = res.g;
  doc["kind"] = kind_name(res.kind);
  doc["n_max"] = res.n_max;
  Json rows = Json::array();
  for (const auto& r : res.rows) {
    Json row;
    row["n"] = r.n;
    row["mechanism"] = r.mechanism;
    row["pass"] = r.pass;
    if (r.lambda_coeff) row["lambda_coeff"] = rat_to_json(*r.lambda_coeff);
    if (r.psi_coeff) row["psi_coeff"] = rat_to_json(*r.psi_coeff);
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  doc["rows"] = rows;
  doc["first_pass"] = res.first_pass ? Json(*res.first_pass) : Json(nullptr);
  return doc;
}

// ---------------------------------------------------------------------------
// Spin-datum verification reports and field elements.
// ---------------------------------------------------------------------------

Json report_to_json(const VerifyReport& rep) {
  Json out;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["detail"] = c.detail;
    checks.push_back(row);
  }
  out["checks"] = checks;
  out["all_pass"] = rep.all_pass;
  out["genus"] = rep.genus;
  return out;
}

VerifyReport report_from_json(const Json& j) {
  VerifyReport rep;
  for (const auto& c : need(j, "checks"))
    rep.checks.push_back(
        NamedCheck{need_string(c, "name"), need_bool(c, "pass"), need_string(c, "detail")});
  rep.all_pass = need_bool(j, "all_pass");
  rep.genus = need_int(j, "genus");
  return rep;
}

Json error_to_json(const std::string& type, const std::string& message) {
  Json doc;
  doc["schema"] = "error/1";
  Json err;
  err["type"] = type;
  err["message"] = message;
  doc["error"] = err;
  return doc;
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

Fp elem_from_json(const PrimeField& f, const Json& j) {
  if (!j.is_string())
    throw UsageError("prime-field elements are encoded as decimal strings");
  Int v;
  try {
    v = Int(j.get<std::string>());
  } catch (const std::exception&) {
    throw UsageError("malformed prime-field element \"" + j.get<std::string>() + "\"");
  }
  Int p(f.p);
  Int r = v % p;
  if (r < 0) r += p;
  return f.elem(r.convert_to<std::uint64_t>());
}

Rat elem_from_json(const RatField&, const Json& j) {
  if (!j.is_string()) throw UsageError("rational elements are encoded as strings");
  return rat_from_string(j.get<std::string>());
}

Quad<Rat> elem_from_json(const QuadExt<RatField>& f, const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw UsageError("quadratic-extension elements are encoded as two-string arrays");
  return f.make(rat_from_string(j[0].get<std::string>()),
                rat_from_string(j[1].get<std::string>()));
}

// ---------------------------------------------------------------------------
// Spin-datum parsing.
// ---------------------------------------------------------------------------

namespace {

template <class K>
TForm<K> linear_form_from_json(const K& f, const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw UsageError("a linear form is encoded as its 3 coefficients");
  TForm<K> L(f, 1);
  const std::array<std::array<int, 3>, 3> exps{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int k = 0; k < 3; ++k) {
    auto v = elem_from_json(f, j[k]);
    if (!f.is_zero(v)) L.add_term(exps[k], v);
  }
  return L;
}

template <class K>
Pt3<K> point_from_json(const K& f, const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw UsageError("a point is encoded as its 3 coordinates");
  return Pt3<K>{elem_from_json(f, j[0]), elem_from_json(f, j[1]), elem_from_json(f, j[2])};
}

template <class K>
SpinDatum<K> datum_from_json_k(const K& f, const Json& j) {
  SpinDatum<K> d;
  d.field = f;
  const Json& fr = need(j, "frame");
  d.frame.field = f;
  d.frame.L = linear_form_from_json(f, need(fr, "L"));
  d.frame.F = linear_form_from_json(f, need(fr, "F"));
  d.frame.n = point_from_json(f, need(fr, "n"));
  d.frame.nprime = point_from_json(f, need(fr, "nprime"));
  d.frame.nsecond = point_from_json(f, need(fr, "nsecond"));
  d.frame.L0 = point_from_json(f, need(fr, "L0"));
  d.frame.L1 = point_from_json(f, need(fr, "L1"));
  d.frame.F0 = point_from_json(f, need(fr, "F0"));
  d.frame.F1 = point_from_json(f, need(fr, "F1"));
  const Json& qc = need(j, "quintic_coeffs");
  if (!qc.is_array() || qc.size() != quintic_monomials().size())
    throw UsageError("quintic_coeffs must list all 21 coefficients");
  std::vector<typename K::Elem> cs;
  for (const auto& e : qc) cs.push_back(elem_from_json(f, e));
  d.gamma = quintic_from_coeffs(f, cs);
  const Json& pts = need(j, "points");
  if (!pts.is_array() || pts.size() != 10)
    throw UsageError("points must list the 10 marked points");
  for (const auto& P : pts) d.points.push_back(point_from_json(f, P));
  const Json& q = need(j, "q_coeffs");
  if (!q.is_array() || q.size() != 3)
    throw UsageError("q_coeffs must list 3 coefficients");
  d.q = {elem_from_json(f, q[0]), elem_from_json(f, q[1]), elem_from_json(f, q[2])};
  const Json& seed = need(j, "seed");
  if (!seed.is_number_integer() && !seed.is_number_unsigned())
    throw UsageError("seed must be an integer");
  d.seed = seed.get<std::uint64_t>();
  d.attempts = need_int(j, "attempts");
  const Json& fails = need(j, "failures");
  if (!fails.is_object()) throw UsageError("failures must map stages to counts");
  for (const auto& [stage, count] : fails.items()) {
    if (!count.is_number_integer()) throw UsageError("failure counts must be integers");
    d.failures[stage] = count.template get<int>();
  }
  d.report = report_from_json(need(j, "report"));
  return d;
}

}  // namespace

AnyDatum datum_from_json(const Json& j) {
  need_schema(j, "spin-datum/1");
  const Json& fj = need(j, "field");
  const Json& ch = need(fj, "char");
  if (!ch.is_number_integer() && !ch.is_number_unsigned())
    throw UsageError("field characteristic must be an integer");
  std::uint64_t p = ch.get<std::uint64_t>();
  if (p != 0) return datum_from_json_k(PrimeField(p), j);
  if (fj.contains("ext_d")) {
    Rat d = rat_from_string(need_string(fj, "ext_d"));
    return datum_from_json_k(QuadExt<RatField>(RatField{}, d), j);
  }
  return datum_from_json_k(RatField{}, j);
}

}  // namespace spincalc
