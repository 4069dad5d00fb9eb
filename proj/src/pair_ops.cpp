#include "chshcert/pair_ops.hpp"

#include <array>
#include <cmath>

namespace chshcert {

namespace {

// L (x) L restricted to the window permutes the four basis vectors with
// signs: |ik> -> |jl>, |il> -> -|jk>, |jk> -> -|il>, |jl> -> |ik>.
// Conjugating the compressed window by it is a signed index reversal.
constexpr std::array<double, 4> kConjSign = {1.0, -1.0, -1.0, 1.0};

void require_bipartite(const std::vector<int>& dims) {
    if (dims.size() != 2)
        throw Error(Error::Kind::Arity, "block projection expects a bipartite state");
}

void require_window(const PairIndex& pair, int dim) {
    if (pair.j > dim)
        throw Error(Error::Kind::Window, "window exceeds truncation level " + std::to_string(dim));
}

std::optional<BlockState> block_from_window(const std::array<std::array<cplx, 4>, 4>& w,
                                            const PairIndex& alpha, const PairIndex& beta) {
    const double weight = (w[0][0] + w[1][1] + w[2][2] + w[3][3]).real();
    if (weight <= kWeightCutoff) return std::nullopt;

    BlockState out;
    out.matrix = ComplexMatrix(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            out.matrix(r, c) = kConjSign[r] * kConjSign[c] * w[3 - r][3 - c] / weight;
    out.weight = weight;
    out.alpha = alpha;
    out.beta = beta;
    return out;
}

} // namespace

int pair_to_linear(int i, int j) {
    if (i < 1 || i >= j)
        throw Error(Error::Kind::Ordering, "pair indices must satisfy 1 <= i < j");
    return (j - 1) * (j - 2) / 2 + i;
}

PairIndex linear_to_pair(int alpha) {
    if (alpha < 1) throw Error(Error::Kind::Index, "pair index must be positive");
    int j = 2;
    while (j * (j - 1) / 2 < alpha) ++j;
    const int i = alpha - (j - 1) * (j - 2) / 2;
    return PairIndex(i, j);
}

PairIndex::PairIndex(int i_in, int j_in) : i(i_in), j(j_in), alpha(pair_to_linear(i_in, j_in)) {}

PairIndex PairIndex::from_alpha(int alpha) { return linear_to_pair(alpha); }

ComplexMatrix make_L(const PairIndex& pair, int dim) {
    require_window(pair, dim);
    ComplexMatrix l(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    l(pair.i - 1, pair.j - 1) = cplx(1.0, 0.0);
    l(pair.j - 1, pair.i - 1) = cplx(-1.0, 0.0);
    return l;
}

ComplexMatrix make_P(const PairIndex& pair, int dim) {
    require_window(pair, dim);
    ComplexMatrix p(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    p(pair.i - 1, pair.i - 1) = cplx(1.0, 0.0);
    p(pair.j - 1, pair.j - 1) = cplx(1.0, 0.0);
    return p;
}

std::optional<BlockState> project_block(const DensityOperator& rho,
                                        const PairIndex& alpha, const PairIndex& beta) {
    require_bipartite(rho.dims());
    const int da = rho.dims()[0], db = rho.dims()[1];
    require_window(alpha, da);
    require_window(beta, db);

    // flat indices of the window basis (ik, il, jk, jl)
    const std::array<std::size_t, 4> f = {
        static_cast<std::size_t>(alpha.i - 1) * db + (beta.i - 1),
        static_cast<std::size_t>(alpha.i - 1) * db + (beta.j - 1),
        static_cast<std::size_t>(alpha.j - 1) * db + (beta.i - 1),
        static_cast<std::size_t>(alpha.j - 1) * db + (beta.j - 1),
    };
    std::array<std::array<cplx, 4>, 4> w;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            w[r][c] = rho.matrix()(f[r], f[c]);
    return block_from_window(w, alpha, beta);
}

std::optional<BlockState> project_block_bipartition(const DensityOperator& rho,
                                                    const Bipartition& p,
                                                    const PairIndex& alpha,
                                                    const PairIndex& beta) {
    auto block = project_block(regroup_density(rho, p), alpha, beta);
    if (block) block->bipartition = p;
    return block;
}

std::optional<BlockState> project_block_pure(const PureState& psi,
                                             const PairIndex& alpha, const PairIndex& beta) {
    require_bipartite(psi.dims());
    const int da = psi.dims()[0], db = psi.dims()[1];
    require_window(alpha, da);
    require_window(beta, db);

    std::array<cplx, 4> a{};  // (a_ik, a_il, a_jk, a_jl)
    for (const auto& t : psi.terms()) {
        const int u = t.idx[0], v = t.idx[1];
        if (u == alpha.i && v == beta.i) a[0] = t.amp;
        else if (u == alpha.i && v == beta.j) a[1] = t.amp;
        else if (u == alpha.j && v == beta.i) a[2] = t.amp;
        else if (u == alpha.j && v == beta.j) a[3] = t.amp;
    }
    const double weight = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]) + std::norm(a[3]);
    if (weight <= kWeightCutoff) return std::nullopt;

    // amplitudes of (L (x) L)|psi> on the window
    const std::array<cplx, 4> b = {a[3], -a[2], -a[1], a[0]};
    BlockState out;
    out.matrix = ComplexMatrix(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            out.matrix(r, c) = b[r] * std::conj(b[c]) / weight;
    out.weight = weight;
    out.alpha = alpha;
    out.beta = beta;
    return out;
}

namespace {

std::vector<std::pair<PairIndex, PairIndex>> blocks_from_occupied(
    const std::vector<bool>& occ_a, const std::vector<bool>& occ_b) {
    const int da = static_cast<int>(occ_a.size());
    const int db = static_cast<int>(occ_b.size());
    std::vector<PairIndex> pa, pb;
    for (int j = 2; j <= da; ++j)
        for (int i = 1; i < j; ++i)
            if (occ_a[i - 1] || occ_a[j - 1]) pa.emplace_back(i, j);
    for (int j = 2; j <= db; ++j)
        for (int i = 1; i < j; ++i)
            if (occ_b[i - 1] || occ_b[j - 1]) pb.emplace_back(i, j);

    std::vector<std::pair<PairIndex, PairIndex>> out;
    out.reserve(pa.size() * pb.size());
    for (const auto& a : pa)
        for (const auto& b : pb) out.emplace_back(a, b);
    return out;
}

} // namespace

std::vector<std::pair<PairIndex, PairIndex>> enumerate_blocks(const DensityOperator& rho) {
    require_bipartite(rho.dims());
    const int da = rho.dims()[0], db = rho.dims()[1];
    std::vector<bool> occ_a(da, false), occ_b(db, false);
    for (int u = 0; u < da; ++u) {
        double mass = 0.0;
        for (int v = 0; v < db; ++v) mass += rho.matrix()(u * db + v, u * db + v).real();
        occ_a[u] = mass > kWeightCutoff;
    }
    for (int v = 0; v < db; ++v) {
        double mass = 0.0;
        for (int u = 0; u < da; ++u) mass += rho.matrix()(u * db + v, u * db + v).real();
        occ_b[v] = mass > kWeightCutoff;
    }
    return blocks_from_occupied(occ_a, occ_b);
}

std::vector<std::pair<PairIndex, PairIndex>> enumerate_blocks(const PureState& psi) {
    require_bipartite(psi.dims());
    std::vector<bool> occ_a(psi.dims()[0], false), occ_b(psi.dims()[1], false);
    for (const auto& t : psi.terms()) {
        if (std::norm(t.amp) <= kWeightCutoff) continue;
        occ_a[t.idx[0] - 1] = true;
        occ_b[t.idx[1] - 1] = true;
    }
    return blocks_from_occupied(occ_a, occ_b);
}

} // namespace chshcert
