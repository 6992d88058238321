#pragma once

#include "spincalc/classes.hpp"
#include "spincalc/simplex.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spincalc {

// ---------------------------------------------------------------------------
// Effectivity certificates for the canonical class of pointed spin spaces.
//
// A certificate records a nonnegative combination of named effective divisor
// classes together with the exact inequalities that make the comparison with
// the canonical class conclusive.  Certificates are built here and can be
// re-evaluated independently with verify_certificate.
// ---------------------------------------------------------------------------

/// Residual of the form written + Σ_b s_b·b with unknown s_b >= bound_b >= 0.
/// Such residuals appear when subtracting classes that carry tail bounds
/// (unknown nonpositive boundary corrections) from an exactly known class:
/// each subtracted tail flips into an unknown nonnegative addition here.
/// A coordinate is certified nonnegative when written + bound >= 0.
struct ResidualClass {
  Space space;
  std::map<BasisClass, Rat> written;
  std::map<BasisClass, Rat> addition_bounds;

  Rat written_coeff(const BasisClass& b) const;
  Rat addition_bound(const BasisClass& b) const;

  /// residual -= coeff * cls with coeff >= 0 (negative coeff is refused:
  /// the tail-bound direction would flip).
  void subtract_scaled(const DivisorClass& cls, const Rat& coeff);
};

/// Start a residual at an exactly known class (tail bounds are refused).
ResidualClass residual_from(const DivisorClass& cls);

/// One recorded inequality; sense is one of "<", "<=", ">", ">=", "==".
/// `pass` is evaluated exactly on construction.
struct Inequality {
  std::string name;
  Rat lhs;
  std::string sense;
  Rat rhs;
  bool pass = false;
};

Inequality make_check(std::string name, const Rat& lhs, std::string sense, const Rat& rhs);

/// One term of the certified combination, resolvable by name via term_class.
struct CertTerm {
  std::string class_name;
  Rat coeff;
};

struct Certificate {
  std::string label;
  Space space;
  /// True for bigness (general-type) certificates; false for plain effective
  /// decompositions of the canonical class (nonnegative Kodaira dimension).
  bool claims_general_type = false;
  std::vector<CertTerm> terms;
  Rat lambda_coeff;   // λ-coefficient of the combination
  Rat psi_coeff;      // common ψ-coefficient of the combination
  Rat psi_surplus;    // 1 − psi_coeff
  /// Exact residual canonical − combination when the machinery can build
  /// every term exactly; absent when a term is known only through its
  /// printed leading coefficients.
  std::optional<ResidualClass> residual;
  std::vector<Inequality> checks;
  std::vector<std::string> notes;
  bool verdict = false;
};

/// Resolve a combination-term name to its exact divisor class on `sp`.
/// Supported names: "mu*(theta-null)", "theta-pointed", "mu*(z)",
/// "sigma*(slope)", "pi*(symmetrized-logan)" (spin spaces with n >= g only),
/// "psi-average", "weighted-tangency-2-2-3" (spin-even, g = 7, n = 3).
/// Unknown names or unsupported spaces throw UsageError.
DivisorClass term_class(const std::string& name, const Space& sp);

/// Tracked coordinates of a class: λ, the common ψ-coefficient, α₀, β₀ and
/// the common genus-0 two-label family coefficient.  Throws logic_error if
/// the ψ- or pair-coefficients are not constant across labels (only
/// label-symmetric classes have tracked coordinates).
struct TrackedVec {
  Rat lambda, psi, alpha0, beta0, pair0;
};
TrackedVec tracked_coords(const DivisorClass& cls);

/// Tracked coordinates of the named combination terms and of the canonical
/// class, from their stated coefficient formulas (independent of the class
/// machinery; the two agree wherever both exist, which tests pin down).
TrackedVec tracked_vector(const std::string& name, const Space& sp);

/// Threshold certificate for bigness of the canonical class on a pointed
/// spin space, 4 <= g <= 11, n >= 1.  For odd spaces with n < g and
/// g in {8..11} the certificate is built from the cone reconstruction
/// (see reconstruct_odd); otherwise from the threshold combination.
/// `with_residual` controls whether the exact residual class is computed
/// when available (n >= g); scanning disables it for speed.
Certificate certify_general_type(const Space& sp, bool with_residual = true);

/// Exact threshold values of the combination on a spin space:
/// λ-coefficient and ψ-coefficient (bigness needs λ < 13 and ψ < 1).
Rat threshold_lambda(const Space& sp);
Rat threshold_psi(const Space& sp);

/// The four bespoke effective decompositions of the canonical class:
/// s73_plus, s84_minus, s93_minus, s111_minus.
Certificate verify_bespoke(const std::string& name);
std::vector<std::string> bespoke_case_names();

/// The s73_plus decomposition with an adjustable coefficient on its weighted
/// tangency-divisor term (certified value 1/12; anything else must fail).
Certificate bespoke_s73_with_coeff(const Rat& tangency_coeff);

/// Independent re-evaluation: rebuild the combination from (space, terms),
/// recompute every recorded inequality and the verdict from scratch, and
/// compare against the recorded content.  True iff everything agrees.
bool verify_certificate(const Certificate& cert);

// ---------------------------------------------------------------------------
// Cone reconstruction on tracked coordinates (odd spaces, g in 8..11,
// 1 <= n < g): decide whether the canonical class is a nonnegative
// combination of the catalogued effective generators plus the ψ-average,
// maximizing the ψ-average share (bigness needs a positive share).
// ---------------------------------------------------------------------------

struct Reconstruction {
  Space space;
  std::vector<std::string> generator_names;
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rat> coefficients;  // generator coefficients at the optimum
  Rat psi_share;                  // optimal ψ-average coefficient
  bool pass = false;              // feasible with psi_share > 0
};
Reconstruction reconstruct_odd(int g, int n);

// ---------------------------------------------------------------------------
// Marking-count scan.
// ---------------------------------------------------------------------------

struct ScanRow {
  int n = 0;
  std::string mechanism;  // "formula" or "lp-reconstruction"
  bool pass = false;
  std::optional<Rat> lambda_coeff;
  std::optional<Rat> psi_coeff;
  std::string note;
};

struct ScanResult {
  int g = 0;
  SpaceKind kind = SpaceKind::SpinEven;
  int n_max = 0;
  std::vector<ScanRow> rows;
  std::optional<int> first_pass;
};

/// For n = 1..n_max report the deciding mechanism and its outcome on the
/// spin space of the given kind.  4 <= g <= 11.
ScanResult threshold_scan(int g, SpaceKind kind, int n_max);

}  // namespace spincalc
