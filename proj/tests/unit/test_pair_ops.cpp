#include "chshcert/pair_ops.hpp"

#include "chshcert/concurrence.hpp"
#include "chshcert/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace chshcert;

namespace {

PureState singlet() {
    return make_pure({2, 2}, {{{1, 2}, cplx(1.0, 0.0)}, {{2, 1}, cplx(-1.0, 0.0)}});
}

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double d = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) d = std::max(d, std::abs(a.data()[f] - b.data()[f]));
    return d;
}

DensityOperator random_mixed(const std::vector<int>& dims, std::uint64_t seed, int parts = 3) {
    std::vector<std::pair<double, DensityOperator>> comps;
    for (int k = 0; k < parts; ++k)
        comps.emplace_back(1.0 / parts, to_density(random_pure(dims, derive_seed(seed, k))));
    return mix(comps);
}

} // namespace

TEST_CASE("pair indexing follows the triangular enumeration") {
    CHECK(pair_to_linear(1, 2) == 1);
    CHECK(pair_to_linear(1, 3) == 2);
    CHECK(pair_to_linear(2, 3) == 3);
    CHECK(pair_to_linear(3, 4) == 6);
    CHECK(pair_to_linear(1, 5) == 7);

    for (int alpha = 1; alpha <= 500; ++alpha) {
        const PairIndex p = linear_to_pair(alpha);
        CHECK(p.i < p.j);
        CHECK(pair_to_linear(p.i, p.j) == alpha);
        CHECK(p.alpha == alpha);
    }
    CHECK_THROWS_AS((void)pair_to_linear(2, 2), Error);
    CHECK_THROWS_AS((void)pair_to_linear(3, 1), Error);
}

TEST_CASE("make_L and make_P") {
    const ComplexMatrix l = make_L(PairIndex(1, 2), 2);
    CHECK(l(0, 1) == cplx(1, 0));
    CHECK(l(1, 0) == cplx(-1, 0));
    CHECK(l(0, 0) == cplx(0, 0));

    const ComplexMatrix p3 = make_P(PairIndex(1, 2), 3);
    CHECK(p3(0, 0) == cplx(1, 0));
    CHECK(p3(1, 1) == cplx(1, 0));
    CHECK(p3(2, 2) == cplx(0, 0));

    for (int alpha = 1; alpha <= 10; ++alpha) {
        const PairIndex pair = linear_to_pair(alpha);
        const int dim = pair.j + 2;
        const ComplexMatrix lm = make_L(pair, dim);
        const ComplexMatrix pm = make_P(pair, dim);
        CHECK((lm.dagger() + lm).max_abs() == 0.0);  // L+ = -L
        CHECK(max_entry_diff(lm * lm.dagger(), pm) == 0.0);
        CHECK(max_entry_diff(pm * pm, pm) == 0.0);
        CHECK(pm.trace() == cplx(2, 0));
    }
    CHECK_THROWS_AS((void)make_L(PairIndex(1, 5), 4), Error);
}

TEST_CASE("project_block on the singlet reproduces the singlet") {
    const auto block = project_block(to_density(singlet()), PairIndex(1, 2), PairIndex(1, 2));
    REQUIRE(block.has_value());
    CHECK(block->weight == doctest::Approx(1.0));
    const ComplexMatrix expected = to_density(singlet()).matrix();
    CHECK(max_entry_diff(block->matrix, expected) < 1e-12);
}

TEST_CASE("project_block maps |11> to the |22>-image") {
    const auto block = project_block(to_density(make_pure({2, 2}, {{{1, 1}, cplx(1, 0)}})),
                                     PairIndex(1, 2), PairIndex(1, 2));
    REQUIRE(block.has_value());
    CHECK(block->weight == doctest::Approx(1.0));
    CHECK(block->matrix(3, 3) == cplx(1, 0));  // |jl> = |22>
    CHECK(wootters(block->matrix) < 1e-12);
}

TEST_CASE("blocks outside the support are absent") {
    const PureState psi = make_pure({4, 4}, {{{1, 1}, cplx(1, 0)}, {{2, 2}, cplx(1, 0)}});
    const auto none = project_block(to_density(psi), PairIndex(3, 4), PairIndex(3, 4));
    CHECK(!none.has_value());
}

TEST_CASE("project_block agrees with the dense conjugation route") {
    for (int k = 0; k < 12; ++k) {
        const std::vector<int> dims = (k % 2 == 0) ? std::vector<int>{3, 4} : std::vector<int>{4, 4};
        const DensityOperator rho = random_mixed(dims, 500 + k);
        for (const auto& [alpha, beta] : enumerate_blocks(rho)) {
            const auto fast = project_block(rho, alpha, beta);
            const auto dense = oracle::project_block_dense(rho, alpha, beta);
            REQUIRE(fast.has_value() == dense.present);
            if (!fast) continue;
            CHECK(std::abs(fast->weight - dense.weight) < 1e-12);
            CHECK(max_entry_diff(fast->matrix, dense.matrix) < 1e-12);
        }
    }
}

TEST_CASE("pure-state projection matches the density route and the norm identity") {
    for (int k = 0; k < 10; ++k) {
        const PureState psi = random_pure({4, 3}, derive_seed(42, k));
        const DensityOperator rho = to_density(psi);
        for (const auto& [alpha, beta] : enumerate_blocks(psi)) {
            const auto from_pure = project_block_pure(psi, alpha, beta);
            const auto from_rho = project_block(rho, alpha, beta);
            REQUIRE(from_pure.has_value() == from_rho.has_value());
            if (!from_pure) continue;
            CHECK(std::abs(from_pure->weight - from_rho->weight) < 1e-12);
            CHECK(max_entry_diff(from_pure->matrix, from_rho->matrix) < 1e-12);

            // w = ||(L x L)|psi>||^2, direct window sum
            double direct = 0.0;
            for (const auto& t : psi.terms()) {
                const bool in_a = t.idx[0] == alpha.i || t.idx[0] == alpha.j;
                const bool in_b = t.idx[1] == beta.i || t.idx[1] == beta.j;
                if (in_a && in_b) direct += std::norm(t.amp);
            }
            CHECK(std::abs(from_pure->weight - direct) < 1e-12);

            // block of a pure state is pure
            const EigenSystem es = hermitian_eigs(from_pure->matrix);
            CHECK(std::abs(es.values[0] - 1.0) < 1e-9);
            CHECK(std::abs(es.values[1]) < 1e-9);
        }
    }
}

TEST_CASE("blocks of PPT states stay PPT") {
    // separable mixture of products
    std::vector<std::pair<double, DensityOperator>> comps;
    for (int k = 0; k < 5; ++k)
        comps.emplace_back(0.2, to_density(random_product({3, 3}, derive_seed(77, k))));
    const DensityOperator sep = mix(comps);
    for (const auto& [alpha, beta] : enumerate_blocks(sep)) {
        const auto block = project_block(sep, alpha, beta);
        if (!block) continue;
        const ComplexMatrix pt = partial_transpose(block->matrix, 2, 2, Side::B);
        CHECK(min_eigenvalue(pt) >= -1e-9);
    }
}

TEST_CASE("bipartition projection handles GHZ and products") {
    const PureState ghz = make_pure(
        {2, 2, 2}, {{{1, 1, 1}, cplx(1, 0)}, {{2, 2, 2}, cplx(1, 0)}});
    const DensityOperator rho = to_density(ghz);

    // p = 1|23: composite right levels (1,1) -> 1 and (2,2) -> 4
    const auto block =
        project_block_bipartition(rho, Bipartition({1}, {2, 3}), PairIndex(1, 2), PairIndex(1, 4));
    REQUIRE(block.has_value());
    CHECK(block->weight == doctest::Approx(1.0));
    CHECK(wootters(block->matrix) == doctest::Approx(1.0));

    // symmetric cut has the same weight
    const auto block2 =
        project_block_bipartition(rho, Bipartition({1, 2}, {3}), PairIndex(1, 4), PairIndex(1, 2));
    REQUIRE(block2.has_value());
    CHECK(block2->weight == doctest::Approx(block->weight));

    // fully product input never yields an entangled block
    const DensityOperator prod = to_density(make_pure({2, 2, 2}, {{{1, 1, 1}, cplx(1, 0)}}));
    for (const Bipartition& p : all_bipartitions(3)) {
        const DensityOperator grouped = regroup_density(prod, p);
        for (const auto& [alpha, beta] : enumerate_blocks(grouped)) {
            const auto b = project_block(grouped, alpha, beta);
            if (b) CHECK(wootters(b->matrix) < 1e-10);
        }
    }
}

TEST_CASE("enumerate_blocks counts") {
    CHECK(enumerate_blocks(random_pure({2, 2}, 3)).size() == 1);
    CHECK(enumerate_blocks(random_pure({3, 3}, 4)).size() == 9);
    const PureState corner = make_pure({5, 5}, {{{1, 1}, cplx(1, 0)}});
    const auto blocks = enumerate_blocks(corner);
    CHECK(blocks.size() == 16);
    for (const auto& [alpha, beta] : blocks) {
        const auto b = project_block_pure(corner, alpha, beta);
        if (b) CHECK(wootters(b->matrix) < 1e-12);
    }
    // canonical ordering
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        const auto& [a1, b1] = blocks[k - 1];
        const auto& [a2, b2] = blocks[k];
        CHECK((a1.alpha < a2.alpha || (a1.alpha == a2.alpha && b1.alpha < b2.alpha)));
    }
}

TEST_CASE("compression order changes no reported scalar") {
    // The window can be compressed before or after the L-conjugation; the
    // two blocks differ by a signed permutation, so weight, concurrence and
    // the CHSH optimum must agree.
    for (int k = 0; k < 8; ++k) {
        const DensityOperator rho = random_mixed({4, 3}, 900 + k);
        for (const auto& [alpha, beta] : enumerate_blocks(rho)) {
            const auto conj_block = project_block(rho, alpha, beta);
            if (!conj_block) continue;

            // plain window compression of rho itself
            const int db = rho.dims()[1];
            const std::array<std::size_t, 4> f = {
                static_cast<std::size_t>(alpha.i - 1) * db + (beta.i - 1),
                static_cast<std::size_t>(alpha.i - 1) * db + (beta.j - 1),
                static_cast<std::size_t>(alpha.j - 1) * db + (beta.i - 1),
                static_cast<std::size_t>(alpha.j - 1) * db + (beta.j - 1),
            };
            ComplexMatrix plain(4, 4);
            double w = 0.0;
            for (int r = 0; r < 4; ++r) w += rho.matrix()(f[r], f[r]).real();
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) plain(r, c) = rho.matrix()(f[r], f[c]) / w;

            CHECK(std::abs(w - conj_block->weight) < 1e-12);
            CHECK(std::abs(wootters(plain) - wootters(conj_block->matrix)) < 1e-10);
            CHECK(std::abs(horodecki_max(plain).value -
                           horodecki_max(conj_block->matrix).value) < 1e-9);
        }
    }
}
