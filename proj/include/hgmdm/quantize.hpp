#pragma once

// Op(sigma) f(x) = int tr(pi(x) sigma(x, pi) f^(pi)) dmu(pi) for separable
// symbols, and its quadratic forms through the Parseval formula.

#include <vector>

#include "hgmdm/fourier.hpp"
#include "hgmdm/symbols.hpp"

namespace hgmdm {

struct QuantizationContext {
  PlancherelGrid grid;
  SpatialGrid spatial;
  fourier::TransformOptions transform{};
};

namespace quantize {

/// Op(sym) f evaluated at g.
cplx apply(const SeparableSymbol& sym, const ProfileFunction& f, const GroupPoint& g, const QuantizationContext& ctx);

/// (Op(sym) u, v) = sum_i int tr(tau_i u^ (F(conj(phi_i) v))^*) dmu.
cplx quadratic_form(const SeparableSymbol& sym, const ProfileFunction& u, const ProfileFunction& v,
                    const QuantizationContext& ctx);

/// Several symbols against the same (u, v); transforms are shared between
/// symbols with equal spatial factors.
std::vector<cplx> quadratic_forms(const std::vector<SeparableSymbol>& syms, const ProfileFunction& u,
                                  const ProfileFunction& v, const QuantizationContext& ctx);

/// Same pairing with u^ given and v supplied as a profile.
std::vector<cplx> quadratic_forms(const std::vector<SeparableSymbol>& syms, const DualField& u_hat,
                                  const ProfileFunction& v, const QuantizationContext& ctx);

/// Spatial route: int Op(sym) u (x) conj(v(x)) dx on ctx.spatial.
cplx quadratic_form_spatial(const SeparableSymbol& sym, const ProfileFunction& u, const ProfileFunction& v,
                            const QuantizationContext& ctx);

/// Re (Op(sigma) u, u) for sigma = (tau psi^{1/2})^* (tau psi^{1/2}), psi >= 0 a
/// spectral multiplier.
double positivity_probe(const SeparableSymbol& tau, const DualFactor& psi, const ProfileFunction& u,
                        const QuantizationContext& ctx);

}  // namespace quantize
}  // namespace hgmdm
