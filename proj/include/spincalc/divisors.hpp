#pragma once

#include "spincalc/numeric.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spincalc {

// ---------------------------------------------------------------------------
// Moduli-space descriptors and divisor-class bases.
//
// Marked points carry labels 1..n; a subset S of labels is a bitmask with
// bit k-1 representing label k.  Boundary classes are stored under a single
// canonical name per divisor (see `canonical`), so sparse coefficient vectors
// are directly comparable.
// ---------------------------------------------------------------------------

enum class SpaceKind { ModuliCurves, SpinEven, SpinOdd };

struct Space {
  SpaceKind kind = SpaceKind::ModuliCurves;
  int g = 2;
  int n = 0;
  bool symmetrized = false;

  friend bool operator==(const Space& a, const Space& b) {
    return a.kind == b.kind && a.g == b.g && a.n == b.n && a.symmetrized == b.symmetrized;
  }
};

std::string kind_name(SpaceKind kind);
SpaceKind kind_from_name(const std::string& name);
void validate_space(const Space& space);

/// Basis tags.  Lambda is the Hodge class; Psi the cotangent classes at the
/// marked points; DeltaIrr the irreducible-nodal boundary on spaces of
/// curves; AlphaIrr/BetaIrr its two spin-level components; Delta/Alpha/Beta
/// the boundary families indexed by a genus split i and a label subset S.
enum class Tag { Lambda, Psi, DeltaIrr, AlphaIrr, BetaIrr, Delta, Alpha, Beta };

std::string tag_name(Tag tag);
Tag tag_from_name(const std::string& name);

struct BasisClass {
  Tag tag = Tag::Lambda;
  int i = 0;
  uint32_t S = 0;

  friend bool operator==(const BasisClass& a, const BasisClass& b) {
    return a.tag == b.tag && a.i == b.i && a.S == b.S;
  }
  friend bool operator<(const BasisClass& a, const BasisClass& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    if (a.i != b.i) return a.i < b.i;
    unsigned pa = std::popcount(a.S), pb = std::popcount(b.S);
    if (pa != pb) return pa < pb;
    return a.S < b.S;
  }
};

/// Canonical name of the class with the given raw index data, or nullopt if
/// the corresponding locus is empty on this space (such classes are zero and
/// disappear from formulas).  Structurally invalid input (wrong tag for the
/// space kind, out-of-range indices, labels beyond n) throws UsageError.
std::optional<BasisClass> canonical(const Space& space, Tag tag, int i, uint32_t S);

/// canonical(), but empty loci are an error instead of nullopt.
BasisClass require_class(const Space& space, Tag tag, int i, uint32_t S);

/// All canonical basis classes of the space in their deterministic order.
std::vector<BasisClass> enumerate_basis(const Space& space);

// ---------------------------------------------------------------------------
// Divisor classes: sparse exact-rational coefficient vectors, plus optional
// tail bounds.  A tail-bound entry (b -> L) records that the written
// coefficient of b is not exact: the true class is coeffs + sum over bounded
// b of (-t_b)·b with unknown t_b >= L >= 0.  Such partially known classes
// refuse exact pairing against curves that meet a bounded coordinate.
// ---------------------------------------------------------------------------

struct DivisorClass {
  Space space;
  std::map<BasisClass, Rat> coeffs;
  std::map<BasisClass, Rat> tail_bounds;

  Rat get(const BasisClass& b) const {
    auto it = coeffs.find(b);
    return it == coeffs.end() ? Rat(0) : it->second;
  }
  void add(const BasisClass& b, const Rat& v) {
    if (v == 0) return;
    auto [it, fresh] = coeffs.emplace(b, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  void add_tail(const BasisClass& b, const Rat& bound) {
    if (bound < 0) throw UsageError("tail bounds must be nonnegative");
    // A zero bound is still recorded: it marks the coordinate as not exactly
    // known (the unknown correction has no positive lower bound).
    tail_bounds[b] += bound;
  }
  bool is_zero() const { return coeffs.empty() && tail_bounds.empty(); }
};

/// dst += c * src (exact part and tail bounds).  Negative c on a class with
/// tail bounds is refused: the bound direction would flip.
void add_scaled(DivisorClass& dst, const DivisorClass& src, const Rat& c);

DivisorClass operator+(const DivisorClass& a, const DivisorClass& b);
DivisorClass operator-(const DivisorClass& a, const DivisorClass& b);
DivisorClass operator*(const Rat& c, const DivisorClass& a);

}  // namespace spincalc
