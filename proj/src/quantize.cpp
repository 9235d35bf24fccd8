#include "hgmdm/quantize.hpp"

#include "hgmdm/error.hpp"
#include "hgmdm/parallel.hpp"

#include <cmath>
#include <optional>

namespace hgmdm::quantize {

namespace {

cplx trace_product(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a.transpose().array() * b.array()).sum();
}

void check_modes(const SeparableSymbol& sym, const QuantizationContext& ctx) {
  for (const auto& t : sym.terms())
    for (const auto& atom : t.dual.atoms())
      if (const auto* h = std::get_if<Hom0Atom>(&atom))
        require(h->plus.rows() == ctx.grid.n_modes(), ErrorCode::Config,
                "symbol '" + sym.spec() + "' built for N = " + std::to_string(h->plus.rows()) +
                    " but the grid uses N = " + std::to_string(ctx.grid.n_modes()));
}

}  // namespace

cplx apply(const SeparableSymbol& sym, const ProfileFunction& f, const GroupPoint& g, const QuantizationContext& ctx) {
  check_modes(sym, ctx);
  const DualField fh = fourier::transform_field(f, ctx.grid, ctx.transform);
  cplx acc = 0.0;
  for (const auto& t : sym.terms()) {
    const cplx phi = t.phi(g);
    if (phi == 0.0) continue;
    std::vector<OperatorMatrix> values(ctx.grid.size());
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) values[i] = t.dual.eval(ctx.grid.rep(i)) * fh.values[i];
    acc += phi * fourier::invert(DualField(ctx.grid, std::move(values)), g);
  }
  return acc;
}

std::vector<cplx> quadratic_forms(const std::vector<SeparableSymbol>& syms, const DualField& u_hat,
                                  const ProfileFunction& v, const QuantizationContext& ctx) {
  const auto& grid = ctx.grid;
  require(u_hat.values.size() == grid.size(), ErrorCode::Config, "u^ is not on the context grid");
  for (const auto& s : syms) check_modes(s, ctx);

  // Distinct spatial factors -> transform of conj(phi) v (constants reuse v^).
  std::vector<ProfileFunction> phis;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uses(syms.size());
  for (std::size_t s = 0; s < syms.size(); ++s)
    for (std::size_t k = 0; k < syms[s].terms().size(); ++k) {
      const auto& phi = syms[s].terms()[k].phi;
      const ProfileFunction key = phi.is_constant() ? ProfileFunction::constant(1.0) : phi;
      std::size_t idx = 0;
      while (idx < phis.size() && !(phis[idx].terms() == key.terms())) ++idx;
      if (idx == phis.size()) phis.push_back(key);
      uses[s].push_back({k, idx});
    }
  std::vector<std::optional<DualField>> w_hat(phis.size());
  for (std::size_t p = 0; p < phis.size(); ++p)
    w_hat[p] = fourier::transform_field(phis[p].conj() * v, grid, ctx.transform);

  // parts[s][i]: contribution of symbol s at node i.
  std::vector<std::vector<cplx>> parts(syms.size(), std::vector<cplx>(grid.size()));
  parallel_for(grid.size(), [&](std::size_t i) {
    const RepPoint rp = grid.rep(i);
    std::vector<std::optional<OperatorMatrix>> gram(phis.size());
    for (std::size_t s = 0; s < syms.size(); ++s) {
      cplx acc = 0.0;
      for (const auto& [k, p] : uses[s]) {
        const auto& term = syms[s].terms()[k];
        if (!gram[p]) gram[p] = u_hat.values[i] * w_hat[p]->values[i].adjoint();
        const cplx scale = term.phi.is_constant() ? term.phi(GroupPoint{}) : cplx(1.0);
        acc += scale * trace_product(term.dual.eval(rp), *gram[p]);
      }
      parts[s][i] = grid.mu()[i] * acc;
    }
  });
  std::vector<cplx> out(syms.size());
  for (std::size_t s = 0; s < syms.size(); ++s) out[s] = pairwise_sum(parts[s]);
  return out;
}

std::vector<cplx> quadratic_forms(const std::vector<SeparableSymbol>& syms, const ProfileFunction& u,
                                  const ProfileFunction& v, const QuantizationContext& ctx) {
  return quadratic_forms(syms, fourier::transform_field(u, ctx.grid, ctx.transform), v, ctx);
}

cplx quadratic_form(const SeparableSymbol& sym, const ProfileFunction& u, const ProfileFunction& v,
                    const QuantizationContext& ctx) {
  return quadratic_forms(std::vector<SeparableSymbol>{sym}, u, v, ctx).front();
}

cplx quadratic_form_spatial(const SeparableSymbol& sym, const ProfileFunction& u, const ProfileFunction& v,
                            const QuantizationContext& ctx) {
  check_modes(sym, ctx);
  const auto& grid = ctx.grid;
  const auto& sp = ctx.spatial;
  const DualField uh = fourier::transform_field(u, grid, ctx.transform);
  const auto& xs = sp.nodes(0);
  const auto& ys = sp.nodes(1);
  const auto& ts = sp.nodes(2);
  const auto& wx = sp.weights(0);
  const auto& wy = sp.weights(1);
  const auto& wt = sp.weights(2);
  const std::size_t nterms = sym.terms().size();

  // A_i(lambda) = tau_i(lambda) u^(lambda); Op u(x, y, t) = sum_i phi_i sum_lambda mu e^{i lambda t} tr(pi(x, y, 0) A_i).
  std::vector<std::vector<OperatorMatrix>> a(nterms, std::vector<OperatorMatrix>(grid.size()));
  for (std::size_t k = 0; k < nterms; ++k)
    for (std::size_t i = 0; i < grid.size(); ++i) a[k][i] = sym.terms()[k].dual.eval(grid.rep(i)) * uh.values[i];

  std::vector<cplx> slabs(xs.size());
  parallel_for(xs.size(), [&](std::size_t ix) {
    cplx slab = 0.0;
    std::vector<cplx> s(nterms * grid.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const OperatorMatrix p = reps::rep_matrix(grid.rep(i), {xs[ix], ys[iy], 0.0});
        for (std::size_t k = 0; k < nterms; ++k) s[k * grid.size() + i] = grid.mu()[i] * trace_product(p, a[k][i]);
      }
      cplx row = 0.0;
      for (std::size_t it = 0; it < ts.size(); ++it) {
        const GroupPoint g{xs[ix], ys[iy], ts[it]};
        const cplx vbar = std::conj(v(g));
        if (vbar == 0.0) continue;
        cplx op = 0.0;
        for (std::size_t k = 0; k < nterms; ++k) {
          cplx inv = 0.0;
          for (std::size_t i = 0; i < grid.size(); ++i)
            inv += std::polar(1.0, grid.lambdas()[i] * ts[it]) * s[k * grid.size() + i];
          op += sym.terms()[k].phi(g) * inv;
        }
        row += wt[it] * op * vbar;
      }
      slab += wy[iy] * row;
    }
    slabs[ix] = wx[ix] * slab;
  });
  return pairwise_sum(slabs);
}

double positivity_probe(const SeparableSymbol& tau, const DualFactor& psi, const ProfileFunction& u,
                        const QuantizationContext& ctx) {
  // Written as the exact square (tau psi^{1/2})^* (tau psi^{1/2}); for
  // psi commuting with tau this is tau^* tau psi.
  DualFactor root = symbols::identity().scaled(std::sqrt(psi.scalar()));
  for (const auto& atom : psi.atoms()) {
    const auto* m = std::get_if<MultiplierAtom>(&atom);
    require(m != nullptr, ErrorCode::InvalidSymbol, "positivity cutoff must be a spectral multiplier");
    const auto f = m->psi;
    root = root * symbols::multiplier([f](double s) { return std::sqrt(f(s)); }, "sqrt(" + m->label + ")");
  }
  const SeparableSymbol half = tau * SeparableSymbol::invariant(root);
  return quadratic_form(half.adjoint() * half, u, u, ctx).real();
}

}  // namespace hgmdm::quantize
