#pragma once

#include "spincalc/certify.hpp"
#include "spincalc/curves.hpp"
#include "spincalc/divisors.hpp"
#include "spincalc/quintic.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace spincalc {

/// All documents use ordered JSON so key order is fixed by the emitter and
/// identical inputs render byte-identically.
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Labels and small scalars.
// ---------------------------------------------------------------------------

/// Textual label of a basis class: "lambda", "delta_irr", "alpha_0",
/// "beta_0", "psi_3", or "alpha(2:{1,3})" for the two-index families.
std::string basis_label(const BasisClass& b);

/// Inverse of basis_label, validated against the given space.
BasisClass basis_from_label(const Space& sp, const std::string& label);

/// Exact rational as {"num": ..., "den": ...} with 64-bit integer parts.
/// Throws UsageError if either part does not fit; the divisor-calculus
/// documents only ever carry small exact values.
Json rat_to_json(const Rat& x);
Rat rat_from_json(const Json& j);

/// Parse "a/b" or "a" (arbitrary precision) into an exact rational.
Rat rat_from_string(const std::string& s);

Json space_to_json(const Space& sp);
Space space_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Documents.  Every document carries a "schema" tag; parsers check it.
// ---------------------------------------------------------------------------

/// schema "spin-divisor/1"
Json divisor_to_json(const DivisorClass& cls);
DivisorClass divisor_from_json(const Json& j);

/// schema "theta-solve/1"
Json theta_report_to_json(const ThetaSolveReport& rep);

/// schema "certificate/1"
Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

/// schema "scan/1"
Json scan_to_json(const ScanResult& res);

/// Verification report block shared by spin-datum documents.
Json report_to_json(const VerifyReport& rep);
VerifyReport report_from_json(const Json& j);

/// schema "error/1"
Json error_to_json(const std::string& type, const std::string& message);

/// Canonical textual rendering: two-space indent plus a trailing newline,
/// so equal documents are byte-identical on stdout and on disk.
std::string dump_document(const Json& doc);

// ---------------------------------------------------------------------------
// Field elements.  Elements are encoded as strings (decimal residue over a
// prime field, "num/den" over the rationals) or as a two-string array
// [a, b] meaning a + b*sqrt(d) over a quadratic extension.
// ---------------------------------------------------------------------------

inline Json elem_to_json(const PrimeField& f, const Fp& x) { return f.str(x); }
inline Json elem_to_json(const RatField&, const Rat& x) { return x.str(); }
inline Json elem_to_json(const QuadExt<RatField>&, const Quad<Rat>& x) {
  return Json::array({x.a.str(), x.b.str()});
}

Fp elem_from_json(const PrimeField& f, const Json& j);
Rat elem_from_json(const RatField& f, const Json& j);
Quad<Rat> elem_from_json(const QuadExt<RatField>& f, const Json& j);

inline Json field_to_json(const PrimeField& f) { return Json{{"char", f.p}}; }
inline Json field_to_json(const RatField&) { return Json{{"char", 0}}; }
inline Json field_to_json(const QuadExt<RatField>& f) {
  return Json{{"char", 0}, {"ext_d", f.d.str()}};
}

template <class K>
Json point_to_json(const K& f, const Pt3<K>& P) {
  return Json::array(
      {elem_to_json(f, P[0]), elem_to_json(f, P[1]), elem_to_json(f, P[2])});
}

/// A linear form as its (x, y, z) coefficient triple.
template <class K>
Json linear_form_to_json(const K& f, const TForm<K>& L) {
  return Json::array({elem_to_json(f, L.coeff({1, 0, 0})),
                      elem_to_json(f, L.coeff({0, 1, 0})),
                      elem_to_json(f, L.coeff({0, 0, 1}))});
}

template <class K>
Json frame_to_json(const FrameConfig<K>& fr) {
  const K& f = fr.field;
  Json out;
  out["L"] = linear_form_to_json(f, fr.L);
  out["F"] = linear_form_to_json(f, fr.F);
  out["n"] = point_to_json(f, fr.n);
  out["nprime"] = point_to_json(f, fr.nprime);
  out["nsecond"] = point_to_json(f, fr.nsecond);
  out["L0"] = point_to_json(f, fr.L0);
  out["L1"] = point_to_json(f, fr.L1);
  out["F0"] = point_to_json(f, fr.F0);
  out["F1"] = point_to_json(f, fr.F1);
  return out;
}

/// schema "spin-datum/1".  Quintic coefficients are listed in the fixed
/// monomial order of quintic_monomials(); q_coeffs is (a, b, c) with
/// restriction-to-L equal to l_n * (a s^2 + b t^2 + c s t)^2.
template <class K>
Json datum_to_json(const SpinDatum<K>& d) {
  const K& f = d.field;
  Json doc;
  doc["schema"] = "spin-datum/1";
  doc["field"] = field_to_json(f);
  doc["frame"] = frame_to_json(d.frame);
  Json qc = Json::array();
  for (const auto& e : quintic_monomials()) qc.push_back(elem_to_json(f, d.gamma.coeff(e)));
  doc["quintic_coeffs"] = qc;
  Json pts = Json::array();
  for (const auto& P : d.points) pts.push_back(point_to_json(f, P));
  doc["points"] = pts;
  doc["q_coeffs"] = Json::array(
      {elem_to_json(f, d.q[0]), elem_to_json(f, d.q[1]), elem_to_json(f, d.q[2])});
  doc["seed"] = d.seed;
  doc["attempts"] = d.attempts;
  Json fails = Json::object();
  for (const auto& [stage, count] : d.failures) fails[stage] = count;
  doc["failures"] = fails;
  doc["report"] = report_to_json(d.report);
  return doc;
}

/// A parsed spin-datum document over whichever field it declares.
using AnyDatum = std::variant<SpinDatum<PrimeField>, SpinDatum<RatField>,
                              SpinDatum<QuadExt<RatField>>>;
AnyDatum datum_from_json(const Json& j);

}  // namespace spincalc
