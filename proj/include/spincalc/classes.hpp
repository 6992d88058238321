#pragma once

#include "spincalc/divisors.hpp"

#include <string>

namespace spincalc {

/// Canonical class of a spin space:
/// 13λ + Σψ − 2α₀ − 3β₀ − 2Σ(boundary families) − α_{1:∅} − β_{1:∅},
/// with empty loci dropped.  Moduli-curves spaces are not supported here.
DivisorClass canonical_class(const Space& space);

/// Named divisor classes.  Supported names:
///   theta_null     (spin-even, n = 0)
///   Z_g            (spin-odd,  n = 0)
///   theta_g1       (spin-odd,  n = 1, g >= 3)
///   theta_gn       (spin-odd,  n >= 1, g >= 3; built by pullback machinery)
///   logan          (moduli-curves, n = g)
///   slope_divisor  (moduli-curves, n = 0; carries tail bounds b_i >= 1)
/// The name weierstrass is recognized but unsupported: no exact class is
/// available for it, so requesting it is an error rather than a guess.
DivisorClass named_class(const std::string& name, const Space& space);

DivisorClass theta_null_class(int g);
DivisorClass z_class(int g);
DivisorClass theta_g1(int g);
DivisorClass theta_gn(int g, int n);
DivisorClass logan_class(int g);
DivisorClass slope_divisor(int g);

/// Slope-divisor λ-coefficient for the genus, per the case table
/// (17/2, 47/6, 7 at g = 4, 6, 10; otherwise 6 + 12/(g+1) for g+1 composite).
Rat slope_value(int g);

/// Pullback along the map forgetting the marked points in `forgotten`
/// (a bitmask over the source labels 1..source.n).  Surviving source labels,
/// in increasing order, correspond to the target labels 1..target.n.
DivisorClass pullback_forgetful(const DivisorClass& cls, const Space& source, uint32_t forgotten);

/// Pullback along the double cover forgetting the spin structure:
/// λ↦λ, ψ↦ψ, δ_irr ↦ α₀ + 2β₀, δ_{i:S} ↦ α_{i:S} + β_{i:S} (empty loci
/// dropped).  `target_kind` selects the spin component.
DivisorClass pullback_pi(const DivisorClass& cls, SpaceKind target_kind);

/// Pushforward along the same cover for classes supported on α₀, β₀ only:
/// α₀ ↦ 2^(2g−2) δ_irr, β₀ ↦ 2^(g−2)(2^(g−1)−1) δ_irr.
DivisorClass pushforward_pi(const DivisorClass& cls);

/// Average coefficients over the label-permutation orbits of the basis.
DivisorClass symmetrize(const DivisorClass& cls);

}  // namespace spincalc
