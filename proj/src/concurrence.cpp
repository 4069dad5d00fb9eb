#include "chshcert/concurrence.hpp"

#include "chshcert/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace chshcert {

namespace {

void require_pure_bipartite(const PureState& psi) {
    if (psi.subsystems() != 2)
        throw Error(Error::Kind::Arity, "formula requires a bipartite pure state");
}

void require_two_qubit(const ComplexMatrix& m) {
    if (!m.is_square() || m.rows() != 4)
        throw Error(Error::Kind::Shape, "expected a 4x4 two-qubit density matrix");
}

ComplexMatrix pauli(int u) {
    ComplexMatrix m(2, 2);
    switch (u) {
        case 0: m(0, 1) = 1.0; m(1, 0) = 1.0; break;                       // sx
        case 1: m(0, 1) = cplx(0.0, -1.0); m(1, 0) = cplx(0.0, 1.0); break; // sy
        default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;                      // sz
    }
    return m;
}

} // namespace

double concurrence_pure(const PureState& psi) {
    require_pure_bipartite(psi);
    const Bipartition split({1}, {2});
    const DensityOperator rho_a = reduced(psi, split, Side::A);
    // Tr rho^2 is the squared Frobenius norm for Hermitian rho
    const double purity = simd::norm2(rho_a.matrix().data(), rho_a.matrix().size());
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

double concurrence_dets(const PureState& psi) {
    require_pure_bipartite(psi);
    const int da = psi.dims()[0], db = psi.dims()[1];
    ComplexMatrix a(static_cast<std::size_t>(da), static_cast<std::size_t>(db));
    for (const auto& t : psi.terms()) a(t.idx[0] - 1, t.idx[1] - 1) = t.amp;

    // all ordered quadruples = 4x the i<j, k<l sum
    double sum = 0.0;
    for (int i = 0; i < da; ++i)
        for (int j = i + 1; j < da; ++j)
            for (int k = 0; k < db; ++k)
                for (int l = k + 1; l < db; ++l)
                    sum += std::norm(a(i, k) * a(j, l) - a(i, l) * a(j, k));
    return std::sqrt(4.0 * sum);
}

namespace {

ConcurrenceReport blocks_report(const PureState& psi, const std::optional<Bipartition>& p) {
    ConcurrenceReport rep;
    rep.method = ConcurrenceMethod::block_decomposition;
    double weighted_sq = 0.0;
    double unweighted = 0.0;
    for (const auto& [alpha, beta] : enumerate_blocks(psi)) {
        const auto block = project_block_pure(psi, alpha, beta);
        if (!block) continue;
        const double c = wootters(block->matrix);
        weighted_sq += (block->weight * c) * (block->weight * c);
        unweighted += c * c;
        rep.contributions.push_back({p, alpha, beta, block->weight, c});
    }
    rep.value = std::sqrt(weighted_sq);
    rep.unweighted_value = std::sqrt(unweighted);
    return rep;
}

} // namespace

ConcurrenceReport concurrence_blocks(const PureState& psi) {
    require_pure_bipartite(psi);
    ConcurrenceReport rep = blocks_report(psi, std::nullopt);
    rep.det_value = concurrence_dets(psi);
    return rep;
}

ConcurrenceReport concurrence_multipartite(const PureState& psi) {
    if (psi.subsystems() < 3)
        throw Error(Error::Kind::Arity, "multipartite concurrence requires m >= 3");
    const int m = psi.subsystems();
    const double norm = 1.0 / (std::pow(2.0, m - 1) - 1.0);

    ConcurrenceReport rep;
    rep.method = ConcurrenceMethod::multipartite;
    double weighted_sq = 0.0, unweighted_sq = 0.0, det_sq = 0.0;
    for (const Bipartition& p : all_bipartitions(m)) {
        const PureState grouped = regroup_pure(psi, p);
        const double cd = concurrence_dets(grouped);
        det_sq += cd * cd;
        ConcurrenceReport part = blocks_report(grouped, p);
        weighted_sq += part.value * part.value;
        unweighted_sq += part.unweighted_value * part.unweighted_value;
        for (auto& contrib : part.contributions) rep.contributions.push_back(std::move(contrib));
    }
    rep.value = std::sqrt(norm * weighted_sq);
    rep.unweighted_value = std::sqrt(norm * unweighted_sq);
    rep.det_value = std::sqrt(norm * det_sq);
    return rep;
}

double wootters(const ComplexMatrix& rho2q) {
    require_two_qubit(rho2q);

    // Factor rho = A A^dagger from its spectral form. The lambda's are the
    // singular values of the symmetric matrix tau = A^T (sy x sy) A, read
    // off a Hermitian embedding so no square root touches a near-zero
    // eigenvalue.
    const EigenSystem es = hermitian_eigs(rho2q);
    const double lmax = std::max(es.values.front(), 0.0);
    ComplexMatrix a(4, 4);
    for (int c = 0; c < 4; ++c) {
        // rounding negatives and numerically-zero branches clamp to exact rank
        const double l = es.values[c];
        const double root = (l > 1e-12 * std::max(lmax, 1e-30)) ? std::sqrt(l) : 0.0;
        for (int r = 0; r < 4; ++r) a(r, c) = es.vectors(r, c) * root;
    }

    const ComplexMatrix yy = kron(pauli(1), pauli(1));
    const ComplexMatrix tau = a.dagger().conj() * yy * a;  // A^T (sy x sy) A

    ComplexMatrix emb(8, 8);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            emb(r, 4 + c) = tau(r, c);
            emb(4 + c, r) = std::conj(tau(r, c));
        }
    const EigenSystem se = hermitian_eigs(emb);  // spectrum {+sigma} u {-sigma}
    double lambdas[4];
    for (int k = 0; k < 4; ++k) lambdas[k] = std::max(se.values[k], 0.0);
    std::sort(lambdas, lambdas + 4, std::greater<double>());
    return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

ChshOptimum horodecki_max(const ComplexMatrix& rho2q) {
    require_two_qubit(rho2q);

    // Pauli correlation matrix T_uv = Tr(rho su (x) sv)
    double t[3][3];
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
            t[u][v] = trace_product_hermitian(kron(pauli(u), pauli(v)), rho2q).real();

    ComplexMatrix tt(3, 3);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += t[k][u] * t[k][v];
            tt(u, v) = s;
        }
    const EigenSystem es = hermitian_eigs(tt);
    const double t1 = std::max(es.values[0], 0.0);
    const double t2 = std::max(es.values[1], 0.0);
    const double value = 2.0 * std::sqrt(t1 + t2);

    // top eigenvectors of T^T T (real symmetric input, so real up to phase)
    auto real_column = [&](int c) {
        Vec3 v{};
        // rotate the largest component onto the real axis
        cplx pivot(0.0, 0.0);
        for (int r = 0; r < 3; ++r)
            if (std::abs(es.vectors(r, c)) > std::abs(pivot)) pivot = es.vectors(r, c);
        const cplx phase = (std::abs(pivot) > 0.0) ? std::conj(pivot) / std::abs(pivot) : cplx(1.0, 0.0);
        for (int r = 0; r < 3; ++r) v[r] = (phase * es.vectors(r, c)).real();
        const double n = vec_norm(v);
        for (double& x : v) x /= n;
        return v;
    };
    const Vec3 c1 = real_column(0);
    const Vec3 c2 = real_column(1);

    auto apply_t = [&](const Vec3& v) {
        Vec3 out{};
        for (int u = 0; u < 3; ++u)
            out[u] = t[u][0] * v[0] + t[u][1] * v[1] + t[u][2] * v[2];
        return out;
    };
    Vec3 u1 = apply_t(c1);
    Vec3 u2 = apply_t(c2);
    const double n1 = vec_norm(u1);
    const double n2 = vec_norm(u2);

    auto fallback_unit = [](const Vec3& avoid) {
        // any unit vector orthogonal to `avoid`
        Vec3 probe = std::abs(avoid[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 out{probe[1] * avoid[2] - probe[2] * avoid[1],
                 probe[2] * avoid[0] - probe[0] * avoid[2],
                 probe[0] * avoid[1] - probe[1] * avoid[0]};
        const double n = vec_norm(out);
        if (n < 1e-12) return Vec3{0, 0, 1};
        for (double& x : out) x /= n;
        return out;
    };

    Vec3 a1, a2;
    if (n1 > 1e-12) { a1 = u1; for (double& x : a1) x /= n1; } else a1 = Vec3{0, 0, 1};
    if (n2 > 1e-12) { a2 = u2; for (double& x : a2) x /= n2; } else a2 = fallback_unit(a1);

    const double theta = std::atan2(n2, n1);
    const double ct = std::cos(theta), st = std::sin(theta);
    const Vec3 b1{ct * c1[0] + st * c2[0], ct * c1[1] + st * c2[1], ct * c1[2] + st * c2[2]};
    const Vec3 b2{ct * c1[0] - st * c2[0], ct * c1[1] - st * c2[1], ct * c1[2] - st * c2[2]};

    return ChshOptimum{value, MeasurementSettings(a1, a2, b1, b2)};
}

} // namespace chshcert
