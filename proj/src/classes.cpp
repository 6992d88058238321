#include "spincalc/classes.hpp"

#include <bit>
#include <map>
#include <set>
#include <vector>

namespace spincalc {

namespace {

uint32_t full_mask(int n) { return n == 0 ? 0u : ((1u << n) - 1u); }

void require_kind(const Space& space, SpaceKind kind, const std::string& what) {
  if (space.kind != kind)
    throw UsageError(what + " requires a " + kind_name(kind) + " space, got " + kind_name(space.kind));
}

Rat binom2(int m) { return Rat(m * (m - 1), 2); }

/// The genus-zero boundary family of the space: the classes subtracted in
/// the ψ pullback formula.
Tag zero_type_tag(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::ModuliCurves: return Tag::Delta;
    case SpaceKind::SpinEven: return Tag::Alpha;
    case SpaceKind::SpinOdd: return Tag::Beta;
  }
  throw UsageError("unknown space kind");
}

/// Iterate over all submasks of `mask`, including 0 and mask itself.
template <class F>
void for_each_submask(uint32_t mask, F&& fn) {
  uint32_t sub = 0;
  while (true) {
    fn(sub);
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

}  // namespace

DivisorClass canonical_class(const Space& space) {
  validate_space(space);
  if (space.kind == SpaceKind::ModuliCurves)
    throw UsageError("canonical_class supports spin spaces only");
  DivisorClass out;
  out.space = space;
  out.space.symmetrized = false;
  out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(13));
  for (int k = 1; k <= space.n; ++k) out.add(BasisClass{Tag::Psi, k, 0}, Rat(1));
  out.add(BasisClass{Tag::AlphaIrr, 0, 0}, Rat(-2));
  out.add(BasisClass{Tag::BetaIrr, 0, 0}, Rat(-3));
  for (const auto& b : enumerate_basis(space))
    if (b.tag == Tag::Alpha || b.tag == Tag::Beta) out.add(b, Rat(-2));
  auto e1 = canonical(space, Tag::Alpha, 1, 0);
  auto e2 = canonical(space, Tag::Beta, 1, 0);
  if (e1) out.add(*e1, Rat(-1));
  // At genus 2 with no markings both names resolve to the same physical
  // divisor; the extra elliptic-tail correction applies once per divisor.
  if (e2 && !(e1 && *e1 == *e2)) out.add(*e2, Rat(-1));
  return out;
}

DivisorClass theta_null_class(int g) {
  Space space{SpaceKind::SpinEven, g, 0, false};
  validate_space(space);
  DivisorClass out;
  out.space = space;
  out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(1, 4));
  out.add(BasisClass{Tag::AlphaIrr, 0, 0}, Rat(-1, 16));
  for (int i = 1; i <= g / 2; ++i)
    out.add(require_class(space, Tag::Beta, i, 0), Rat(-1, 2));
  return out;
}

DivisorClass z_class(int g) {
  Space space{SpaceKind::SpinOdd, g, 0, false};
  validate_space(space);
  DivisorClass out;
  out.space = space;
  out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(g + 8));
  out.add(BasisClass{Tag::AlphaIrr, 0, 0}, Rat(-(g + 2), 4));
  out.add(BasisClass{Tag::BetaIrr, 0, 0}, Rat(-2));
  for (int i = 1; i <= g - 1; ++i)
    out.add(require_class(space, Tag::Alpha, i, 0), Rat(-2 * (g - i)));
  return out;
}

DivisorClass theta_g1(int g) {
  if (g < 3) throw UsageError("theta_g1 requires genus at least 3");
  Space space{SpaceKind::SpinOdd, g, 1, false};
  DivisorClass out;
  out.space = space;
  out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(1, 4));
  out.add(BasisClass{Tag::Psi, 1, 0}, Rat(1, 2));
  out.add(BasisClass{Tag::AlphaIrr, 0, 0}, Rat(-1, 16));
  for (int i = 1; i <= g - 1; ++i)
    out.add(require_class(space, Tag::Alpha, i, 0), Rat(-1, 2));
  return out;
}

DivisorClass theta_gn(int g, int n) {
  if (g < 3) throw UsageError("theta_gn requires genus at least 3");
  if (n < 1) throw UsageError("theta_gn requires at least one marked point");
  Space source{SpaceKind::SpinOdd, g, n, false};
  validate_space(source);
  DivisorClass base = theta_g1(g);
  DivisorClass out;
  out.space = source;
  for (int j = 1; j <= n; ++j) {
    uint32_t forgotten = full_mask(n) & ~(1u << (j - 1));
    add_scaled(out, pullback_forgetful(base, source, forgotten), Rat(1));
  }
  return out;
}

DivisorClass logan_class(int g) {
  Space space{SpaceKind::ModuliCurves, g, g, false};
  validate_space(space);
  DivisorClass out;
  out.space = space;
  out.add(BasisClass{Tag::Lambda, 0, 0}, Rat(-1));
  for (int k = 1; k <= g; ++k) out.add(BasisClass{Tag::Psi, k, 0}, Rat(1));
  for (const auto& b : enumerate_basis(space)) {
    if (b.tag != Tag::Delta) continue;
    int size = std::popcount(b.S);
    int m = size >= b.i ? size - b.i : b.i - size;
    out.add(b, -binom2(m + 1));
  }
  return out;
}

Rat slope_value(int g) {
  if (g == 4) return Rat(17, 2);
  if (g == 6) return Rat(47, 6);
  if (g == 10) return Rat(7);
  if (g + 1 >= 4 && !is_prime(Int(g + 1))) return Rat(6) + Rat(12, g + 1);
  throw UsageError("no slope divisor available for genus " + std::to_string(g));
}

DivisorClass slope_divisor(int g) {
  Space space{SpaceKind::ModuliCurves, g, 0, false};
  validate_space(space);
  DivisorClass out;
  out.space = space;
  out.add(BasisClass{Tag::Lambda, 0, 0}, slope_value(g));
  out.add(BasisClass{Tag::DeltaIrr, 0, 0}, Rat(-1));
  for (int i = 1; i <= g / 2; ++i)
    out.add_tail(require_class(space, Tag::Delta, i, 0), Rat(1));
  return out;
}

DivisorClass named_class(const std::string& name, const Space& space) {
  validate_space(space);
  if (name == "theta_null") {
    require_kind(space, SpaceKind::SpinEven, "theta_null");
    if (space.n != 0) throw UsageError("theta_null is defined on the unpointed space (n = 0)");
    return theta_null_class(space.g);
  }
  if (name == "Z_g") {
    require_kind(space, SpaceKind::SpinOdd, "Z_g");
    if (space.n != 0) throw UsageError("Z_g is defined on the unpointed space (n = 0)");
    return z_class(space.g);
  }
  if (name == "theta_g1") {
    require_kind(space, SpaceKind::SpinOdd, "theta_g1");
    if (space.n != 1) throw UsageError("theta_g1 is defined for n = 1");
    return theta_g1(space.g);
  }
  if (name == "theta_gn") {
    require_kind(space, SpaceKind::SpinOdd, "theta_gn");
    return theta_gn(space.g, space.n);
  }
  if (name == "logan") {
    require_kind(space, SpaceKind::ModuliCurves, "logan");
    if (space.n != space.g) throw UsageError("the logan class is defined for n = g");
    return logan_class(space.g);
  }
  if (name == "slope_divisor") {
    require_kind(space, SpaceKind::ModuliCurves, "slope_divisor");
    if (space.n != 0) throw UsageError("slope_divisor is defined on the unpointed space (n = 0)");
    return slope_divisor(space.g);
  }
  if (name == "weierstrass")
    throw UsageError("named class 'weierstrass' is recorded but unsupported: no exact class is available");
  throw UsageError("unknown named class: " + name);
}

DivisorClass pullback_forgetful(const DivisorClass& cls, const Space& source, uint32_t forgotten) {
  validate_space(source);
  const Space& target = cls.space;
  if (source.kind != target.kind || source.g != target.g)
    throw UsageError("forgetful pullback requires matching kind and genus");
  if ((forgotten & ~full_mask(source.n)) != 0)
    throw UsageError("forgotten labels exceed the source marked points");
  int nf = std::popcount(forgotten);
  if (source.n - nf != target.n)
    throw UsageError("forgotten-label count does not match the difference in marked points");
  // eta[j] = source label corresponding to target label j (order-preserving).
  std::vector<int> eta(target.n + 1, 0);
  {
    int j = 0;
    for (int lab = 1; lab <= source.n; ++lab)
      if ((forgotten & (1u << (lab - 1))) == 0) eta[++j] = lab;
  }
  auto lift_mask = [&](uint32_t St) {
    uint32_t out = 0;
    for (int j = 1; j <= target.n; ++j)
      if (St & (1u << (j - 1))) out |= 1u << (eta[j] - 1);
    return out;
  };
  Tag zt = zero_type_tag(source.kind);
  DivisorClass out;
  out.space = source;
  out.space.symmetrized = false;
  auto route = [&](const BasisClass& b, const Rat& v, bool is_tail) {
    auto put = [&](const BasisClass& c, const Rat& w) {
      if (is_tail) out.add_tail(c, w);
      else out.add(c, w);
    };
    switch (b.tag) {
      case Tag::Lambda:
      case Tag::DeltaIrr:
      case Tag::AlphaIrr:
      case Tag::BetaIrr:
        put(b, v);
        return;
      case Tag::Psi: {
        if (is_tail) throw UsageError("cannot pull back a tail bound on a psi class");
        int src_lab = eta[b.i];
        put(BasisClass{Tag::Psi, src_lab, 0}, v);
        for_each_submask(forgotten, [&](uint32_t T) {
          if (T == 0) return;
          uint32_t S = T | (1u << (src_lab - 1));
          if (auto c = canonical(source, zt, 0, S)) out.add(*c, -v);
        });
        return;
      }
      case Tag::Delta:
      case Tag::Alpha:
      case Tag::Beta: {
        // Each distinct boundary divisor of the source mapping onto b enters
        // with multiplicity one.  Distinct lift masks can name the same
        // canonical class (the two sides of a g = 2i split when every label
        // is forgotten), so deduplicate by canonical name.
        uint32_t base = lift_mask(b.S);
        std::set<BasisClass> seen;
        for_each_submask(forgotten, [&](uint32_t T) {
          if (auto c = canonical(source, b.tag, b.i, base | T))
            if (seen.insert(*c).second) put(*c, v);
        });
        return;
      }
    }
    throw UsageError("unknown tag in pullback");
  };
  for (auto& [b, v] : cls.coeffs) route(b, v, false);
  for (auto& [b, L] : cls.tail_bounds) route(b, L, true);
  return out;
}

DivisorClass pullback_pi(const DivisorClass& cls, SpaceKind target_kind) {
  if (cls.space.kind != SpaceKind::ModuliCurves)
    throw UsageError("pullback_pi expects a class on a moduli-curves space");
  if (target_kind == SpaceKind::ModuliCurves)
    throw UsageError("pullback_pi targets a spin space");
  Space target{target_kind, cls.space.g, cls.space.n, false};
  DivisorClass out;
  out.space = target;
  auto route = [&](const BasisClass& b, const Rat& v, bool is_tail) {
    auto put = [&](const BasisClass& c, const Rat& w) {
      if (is_tail) out.add_tail(c, w);
      else out.add(c, w);
    };
    switch (b.tag) {
      case Tag::Lambda:
      case Tag::Psi:
        put(b, v);
        return;
      case Tag::DeltaIrr:
        put(BasisClass{Tag::AlphaIrr, 0, 0}, v);
        put(BasisClass{Tag::BetaIrr, 0, 0}, 2 * v);
        return;
      case Tag::Delta: {
        // The two spin-level families over a boundary divisor; at a
        // self-complementary split (n = 0, i = g/2, odd parity) both names
        // resolve to the single physical divisor, which the unramified
        // cover hits with multiplicity one.
        auto ca = canonical(target, Tag::Alpha, b.i, b.S);
        auto cb = canonical(target, Tag::Beta, b.i, b.S);
        if (ca) put(*ca, v);
        if (cb && !(ca && *ca == *cb)) put(*cb, v);
        return;
      }
      default:
        throw UsageError("unexpected spin tag on a moduli-curves class");
    }
  };
  for (auto& [b, v] : cls.coeffs) route(b, v, false);
  for (auto& [b, L] : cls.tail_bounds) route(b, L, true);
  return out;
}

DivisorClass pushforward_pi(const DivisorClass& cls) {
  if (cls.space.kind == SpaceKind::ModuliCurves)
    throw UsageError("pushforward_pi expects a class on a spin space");
  if (!cls.tail_bounds.empty())
    throw UsageError("pushforward_pi requires a fully known class");
  for (auto& [b, v] : cls.coeffs)
    if (b.tag != Tag::AlphaIrr && b.tag != Tag::BetaIrr)
      throw UsageError("pushforward_pi supports classes on α₀, β₀ only");
  const int g = cls.space.g;
  Int ca = boost::multiprecision::pow(Int(2), 2 * g - 2);
  Int cb = boost::multiprecision::pow(Int(2), g - 2) * (boost::multiprecision::pow(Int(2), g - 1) - 1);
  DivisorClass out;
  out.space = Space{SpaceKind::ModuliCurves, g, cls.space.n, false};
  Rat total = Rat(ca) * cls.get(BasisClass{Tag::AlphaIrr, 0, 0}) +
              Rat(cb) * cls.get(BasisClass{Tag::BetaIrr, 0, 0});
  out.add(BasisClass{Tag::DeltaIrr, 0, 0}, total);
  return out;
}

DivisorClass symmetrize(const DivisorClass& cls) {
  const Space& space = cls.space;
  DivisorClass out;
  out.space = space;
  out.space.symmetrized = true;
  if (space.n == 0) {
    out.coeffs = cls.coeffs;
    out.tail_bounds = cls.tail_bounds;
    return out;
  }
  // Orbit key of a basis class under label permutations.  Families keep
  // (tag, i) and the subset size, except that when the two sides of the
  // genus split coincide (g = 2i, identified names), sizes k and n-k fall in
  // one orbit.
  auto orbit_key = [&](const BasisClass& b) -> std::tuple<Tag, int, int> {
    switch (b.tag) {
      case Tag::Lambda:
      case Tag::DeltaIrr:
      case Tag::AlphaIrr:
      case Tag::BetaIrr:
        return {b.tag, b.i, 0};
      case Tag::Psi:
        return {Tag::Psi, 0, 0};
      default: {
        int size = std::popcount(b.S);
        bool self_paired = (2 * b.i == space.g) && (b.tag == Tag::Delta || space.kind == SpaceKind::SpinEven);
        if (self_paired) size = std::min(size, space.n - size);
        return {b.tag, b.i, size};
      }
    }
  };
  std::map<std::tuple<Tag, int, int>, std::vector<BasisClass>> orbits;
  for (const auto& b : enumerate_basis(space)) orbits[orbit_key(b)].push_back(b);
  auto average = [&](const std::map<BasisClass, Rat>& in, bool tails) {
    for (auto& [key, members] : orbits) {
      Rat total = 0;
      bool found = false;
      for (const auto& m : members) {
        auto it = in.find(m);
        if (it != in.end()) {
          total += it->second;
          found = true;
        }
      }
      // Exact zero coefficients stay absent, but a tail entry marks its whole
      // orbit as not exactly known even when the averaged bound is zero.
      if (tails ? !found : total == 0) continue;
      Rat each = total / Rat((long long)members.size());
      for (const auto& m : members) {
        if (tails) out.add_tail(m, each);
        else out.add(m, each);
      }
    }
  };
  average(cls.coeffs, false);
  average(cls.tail_bounds, true);
  return out;
}

}  // namespace spincalc
