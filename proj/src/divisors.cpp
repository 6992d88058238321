#include "spincalc/divisors.hpp"

#include <algorithm>
#include <set>

namespace spincalc {

std::string kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::ModuliCurves: return "moduli-curves";
    case SpaceKind::SpinEven: return "spin-even";
    case SpaceKind::SpinOdd: return "spin-odd";
  }
  throw UsageError("unknown space kind");
}

SpaceKind kind_from_name(const std::string& name) {
  if (name == "moduli-curves") return SpaceKind::ModuliCurves;
  if (name == "spin-even") return SpaceKind::SpinEven;
  if (name == "spin-odd") return SpaceKind::SpinOdd;
  throw UsageError("unknown space kind: " + name);
}

void validate_space(const Space& space) {
  if (space.g < 2) throw UsageError("genus must be at least 2");
  if (space.n < 0) throw UsageError("number of marked points must be nonnegative");
  if (space.n > 30) throw UsageError("number of marked points too large for subset masks");
}

std::string tag_name(Tag tag) {
  switch (tag) {
    case Tag::Lambda: return "lambda";
    case Tag::Psi: return "psi";
    case Tag::DeltaIrr: return "delta_irr";
    case Tag::AlphaIrr: return "alpha_0";
    case Tag::BetaIrr: return "beta_0";
    case Tag::Delta: return "delta";
    case Tag::Alpha: return "alpha";
    case Tag::Beta: return "beta";
  }
  throw UsageError("unknown tag");
}

Tag tag_from_name(const std::string& name) {
  if (name == "lambda") return Tag::Lambda;
  if (name == "psi") return Tag::Psi;
  if (name == "delta_irr") return Tag::DeltaIrr;
  if (name == "alpha_0") return Tag::AlphaIrr;
  if (name == "beta_0") return Tag::BetaIrr;
  if (name == "delta") return Tag::Delta;
  if (name == "alpha") return Tag::Alpha;
  if (name == "beta") return Tag::Beta;
  throw UsageError("unknown tag: " + name);
}

namespace {

bool tag_valid_for(SpaceKind kind, Tag tag) {
  switch (tag) {
    case Tag::Lambda:
    case Tag::Psi: return true;
    case Tag::DeltaIrr:
    case Tag::Delta: return kind == SpaceKind::ModuliCurves;
    case Tag::AlphaIrr:
    case Tag::BetaIrr:
    case Tag::Alpha:
    case Tag::Beta: return kind != SpaceKind::ModuliCurves;
  }
  return false;
}

uint32_t full_mask(int n) { return n == 0 ? 0u : ((1u << n) - 1u); }

/// Apply the (i, S) <-> (g-i, S-complement) identification, preferring the
/// smaller i and breaking i = g-i ties toward the side containing label 1.
void reduce_split(int g, int n, int& i, uint32_t& S) {
  uint32_t comp = full_mask(n) & ~S;
  if (i > g - i) {
    i = g - i;
    S = comp;
  } else if (i == g - i && n >= 1 && (S & 1u) == 0) {
    S = comp;
  }
}

}  // namespace

std::optional<BasisClass> canonical(const Space& space, Tag tag, int i, uint32_t S) {
  validate_space(space);
  if (!tag_valid_for(space.kind, tag))
    throw UsageError("basis tag " + tag_name(tag) + " is not valid on a " + kind_name(space.kind) + " space");
  if ((S & ~full_mask(space.n)) != 0) throw UsageError("label subset exceeds the number of marked points");
  switch (tag) {
    case Tag::Lambda:
    case Tag::DeltaIrr:
    case Tag::AlphaIrr:
    case Tag::BetaIrr:
      if (i != 0 || S != 0) throw UsageError("tag " + tag_name(tag) + " carries no indices");
      return BasisClass{tag, 0, 0};
    case Tag::Psi:
      if (S != 0) throw UsageError("psi classes carry no label subset");
      if (i < 1 || i > space.n) throw UsageError("psi index out of range");
      return BasisClass{tag, i, 0};
    default: break;
  }
  // Boundary families delta/alpha/beta.
  if (i < 0 || i > space.g) throw UsageError("boundary genus index out of range");
  const int g = space.g, n = space.n;
  auto genus_zero_ok = [&](int gi, uint32_t Si) {
    // A genus-0 side needs at least two special labels besides the node.
    return gi != 0 || std::popcount(Si) >= 2;
  };
  switch (space.kind) {
    case SpaceKind::ModuliCurves: {
      reduce_split(g, n, i, S);
      if (!genus_zero_ok(i, S)) return std::nullopt;
      return BasisClass{Tag::Delta, i, S};
    }
    case SpaceKind::SpinEven: {
      reduce_split(g, n, i, S);
      if (!genus_zero_ok(i, S)) return std::nullopt;
      if (tag == Tag::Beta && i == 0) return std::nullopt;  // empty locus
      return BasisClass{tag, i, S};
    }
    case SpaceKind::SpinOdd: {
      // Identification beta_{i:S} = alpha_{g-i:S-complement}; alpha_{0:S} is
      // an empty locus.  Canonical names: alpha_{i:S} for 1 <= i <= g-1 and
      // beta_{0:S} (standing for the alpha_{g:...} side).
      if (tag == Tag::Beta) {
        if (i == 0) {
          if (std::popcount(S) < 2) return std::nullopt;
          return BasisClass{Tag::Beta, 0, S};
        }
        tag = Tag::Alpha;
        i = g - i;
        S = full_mask(n) & ~S;
      }
      if (i == 0) return std::nullopt;  // empty locus
      if (i == g) {
        uint32_t comp = full_mask(n) & ~S;
        if (std::popcount(comp) < 2) return std::nullopt;
        return BasisClass{Tag::Beta, 0, comp};
      }
      return BasisClass{Tag::Alpha, i, S};
    }
  }
  throw UsageError("unknown space kind");
}

BasisClass require_class(const Space& space, Tag tag, int i, uint32_t S) {
  auto c = canonical(space, tag, i, S);
  if (!c) throw UsageError("class " + tag_name(tag) + " with these indices is empty on this space");
  return *c;
}

std::vector<BasisClass> enumerate_basis(const Space& space) {
  validate_space(space);
  std::set<BasisClass> out;
  out.insert(BasisClass{Tag::Lambda, 0, 0});
  for (int k = 1; k <= space.n; ++k) out.insert(BasisClass{Tag::Psi, k, 0});
  std::vector<Tag> families;
  if (space.kind == SpaceKind::ModuliCurves) {
    out.insert(BasisClass{Tag::DeltaIrr, 0, 0});
    families = {Tag::Delta};
  } else {
    out.insert(BasisClass{Tag::AlphaIrr, 0, 0});
    out.insert(BasisClass{Tag::BetaIrr, 0, 0});
    families = {Tag::Alpha, Tag::Beta};
  }
  uint32_t top = full_mask(space.n);
  for (Tag tag : families)
    for (int i = 0; i <= space.g; ++i)
      for (uint32_t S = 0;; ++S) {
        if (auto c = canonical(space, tag, i, S)) out.insert(*c);
        if (S == top) break;
      }
  return std::vector<BasisClass>(out.begin(), out.end());
}

void add_scaled(DivisorClass& dst, const DivisorClass& src, const Rat& c) {
  if (!(dst.space == src.space)) throw UsageError("divisor classes live on different spaces");
  if (c == 0) return;
  if (c < 0 && !src.tail_bounds.empty())
    throw UsageError("cannot scale a partially known class by a negative coefficient");
  for (auto& [b, v] : src.coeffs) dst.add(b, c * v);
  for (auto& [b, L] : src.tail_bounds) dst.add_tail(b, c * L);
}

DivisorClass operator+(const DivisorClass& a, const DivisorClass& b) {
  DivisorClass out = a;
  add_scaled(out, b, Rat(1));
  return out;
}

DivisorClass operator-(const DivisorClass& a, const DivisorClass& b) {
  DivisorClass out = a;
  add_scaled(out, b, Rat(-1));
  return out;
}

DivisorClass operator*(const Rat& c, const DivisorClass& a) {
  DivisorClass out;
  out.space = a.space;
  add_scaled(out, a, c);
  return out;
}

}  // namespace spincalc
