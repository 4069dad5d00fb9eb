#include "chshcert/chsh.hpp"

#include <cmath>

namespace chshcert {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double vec_norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

namespace {

Vec3 unitize(Vec3 v) {
    const double n = vec_norm(v);
    if (std::abs(n - 1.0) > 1e-6)
        throw Error(Error::Kind::Norm, "measurement vector norm deviates from 1 by more than 1e-6");
    for (double& c : v) c /= n;
    return v;
}

void require_bipartite_dims(const std::vector<int>& dims) {
    if (dims.size() != 2)
        throw Error(Error::Kind::Arity, "CHSH operator expects bipartite dims");
}

} // namespace

MeasurementSettings::MeasurementSettings(Vec3 a1_in, Vec3 a2_in, Vec3 b1_in, Vec3 b2_in)
    : a1(unitize(a1_in)), a2(unitize(a2_in)), b1(unitize(b1_in)), b2(unitize(b2_in)) {}

ComplexMatrix make_A(const Vec3& setting, const PairIndex& pair, int dim) {
    if (pair.j > dim)
        throw Error(Error::Kind::Window, "observable window exceeds truncation");
    Vec3 a = setting;
    const double n = vec_norm(a);
    if (std::abs(n - 1.0) > 1e-6)
        throw Error(Error::Kind::Norm, "measurement vector norm deviates from 1 by more than 1e-6");
    for (double& c : a) c /= n;

    ComplexMatrix m(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    m(pair.i - 1, pair.i - 1) = cplx(a[2], 0.0);
    m(pair.i - 1, pair.j - 1) = cplx(a[0], -a[1]);
    m(pair.j - 1, pair.i - 1) = cplx(a[0], a[1]);
    m(pair.j - 1, pair.j - 1) = cplx(-a[2], 0.0);
    return m;
}

ComplexMatrix conjugate_by_L(const ComplexMatrix& a, const PairIndex& pair) {
    if (!a.is_square() || pair.j > static_cast<int>(a.rows()))
        throw Error(Error::Kind::Window, "observable window exceeds matrix side");
    // support check: nothing outside the window
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            const bool in_window = (r == static_cast<std::size_t>(pair.i - 1) ||
                                    r == static_cast<std::size_t>(pair.j - 1)) &&
                                   (c == static_cast<std::size_t>(pair.i - 1) ||
                                    c == static_cast<std::size_t>(pair.j - 1));
            if (!in_window && std::abs(a(r, c)) > 1e-12)
                throw Error(Error::Kind::Window, "observable has support outside its window");
        }
    const ComplexMatrix l = make_L(pair, static_cast<int>(a.rows()));
    return l * a * l.dagger();
}

ChshOperator make_chsh(const PairIndex& alpha, const PairIndex& beta,
                       const MeasurementSettings& settings, const std::vector<int>& dims) {
    require_bipartite_dims(dims);
    const int da = dims[0], db = dims[1];
    if (alpha.j > da || beta.j > db)
        throw Error(Error::Kind::Window, "CHSH window exceeds truncation");

    const ComplexMatrix a1t = conjugate_by_L(make_A(settings.a1, alpha, da), alpha);
    const ComplexMatrix a2t = conjugate_by_L(make_A(settings.a2, alpha, da), alpha);
    const ComplexMatrix b1t = conjugate_by_L(make_A(settings.b1, beta, db), beta);
    const ComplexMatrix b2t = conjugate_by_L(make_A(settings.b2, beta, db), beta);

    ComplexMatrix m = kron(a1t, b1t);
    m += kron(a1t, b2t);
    m += kron(a2t, b1t);
    m -= kron(a2t, b2t);

    return ChshOperator{alpha, beta, std::nullopt, settings, dims, std::move(m)};
}

ChshOperator make_chsh_bipartition(const Bipartition& p, const PairIndex& alpha,
                                   const PairIndex& beta, const MeasurementSettings& settings,
                                   const std::vector<int>& dims) {
    int dl = 1, dr = 1;
    for (int s : p.left) dl *= dims.at(s - 1);
    for (int s : p.right) dr *= dims.at(s - 1);
    ChshOperator op = make_chsh(alpha, beta, settings, {dl, dr});
    op.bipartition = p;
    return op;
}

double expectation_raw(const ChshOperator& b, const DensityOperator& rho) {
    if (b.matrix.rows() != rho.side())
        throw Error(Error::Kind::Shape, "operator and state live on different spaces");
    const cplx t = trace_product_hermitian(b.matrix, rho.matrix());
    if (std::abs(t.imag()) > 1e-10)
        throw Error(Error::Kind::Symmetry, "CHSH expectation has non-real residue");
    return t.real();
}

ComplexMatrix two_qubit_chsh(const MeasurementSettings& settings) {
    const PairIndex whole(1, 2);
    const ComplexMatrix a1 = make_A(settings.a1, whole, 2);
    const ComplexMatrix a2 = make_A(settings.a2, whole, 2);
    const ComplexMatrix b1 = make_A(settings.b1, whole, 2);
    const ComplexMatrix b2 = make_A(settings.b2, whole, 2);
    ComplexMatrix m = kron(a1, b1);
    m += kron(a1, b2);
    m += kron(a2, b1);
    m -= kron(a2, b2);
    return m;
}

double expectation_block(const MeasurementSettings& settings, const BlockState& block) {
    if (block.weight <= kWeightCutoff)
        throw Error(Error::Kind::AbsentBlock, "expectation of an absent block");
    const ComplexMatrix b2 = two_qubit_chsh(settings);
    const cplx t = trace_product_hermitian(b2, block.matrix);
    return t.real();
}

Witness make_witness(const ChshOperator& b) {
    ComplexMatrix w = ComplexMatrix::identity(b.matrix.rows());
    w *= cplx(2.0, 0.0);
    w -= b.matrix;

    // B is supported on the window, so its spectrum is the 4x4 window
    // compression plus zeros; W = 2I - B turns negative iff that
    // compression exceeds 2.
    const std::size_t db = static_cast<std::size_t>(b.dims.at(1));
    const std::array<std::size_t, 4> f = {
        static_cast<std::size_t>(b.alpha.i - 1) * db + (b.beta.i - 1),
        static_cast<std::size_t>(b.alpha.i - 1) * db + (b.beta.j - 1),
        static_cast<std::size_t>(b.alpha.j - 1) * db + (b.beta.i - 1),
        static_cast<std::size_t>(b.alpha.j - 1) * db + (b.beta.j - 1),
    };
    ComplexMatrix bw(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) bw(r, c) = b.matrix(f[r], f[c]);
    const double top = hermitian_eigs(bw).values.front();

    return Witness{std::move(w), b, top > 2.0 + 1e-12};
}

} // namespace chshcert
