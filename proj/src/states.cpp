#include "chshcert/states.hpp"

#include "chshcert/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "chshcert/rng.hpp"
#include <sstream>

using json = nlohmann::ordered_json;

namespace chshcert {

namespace {

std::size_t checked_side(const std::vector<int>& dims, int min_level) {
    if (dims.empty()) throw Error(Error::Kind::Arity, "state needs at least one subsystem");
    std::size_t side = 1;
    for (int d : dims) {
        if (d < min_level)
            throw Error(Error::Kind::Index, "subsystem truncation level below " + std::to_string(min_level));
        side *= static_cast<std::size_t>(d);
        if (side > ComplexMatrix::kMaxSide)
            throw Error(Error::Kind::Size, "product space side exceeds 4096");
    }
    return side;
}

} // namespace

PureState::PureState(std::vector<int> dims, std::vector<AmplitudeTerm> terms)
    : dims_(std::move(dims)), terms_(std::move(terms)) {}

std::size_t PureState::space_side() const noexcept {
    std::size_t side = 1;
    for (int d : dims_) side *= static_cast<std::size_t>(d);
    return side;
}

std::size_t PureState::flat_index(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s)
        f = f * static_cast<std::size_t>(dims_[s]) + static_cast<std::size_t>(idx[s] - 1);
    return f;
}

std::vector<cplx> PureState::dense() const {
    std::vector<cplx> v(space_side(), cplx(0.0, 0.0));
    for (const auto& t : terms_) v[flat_index(t.idx)] = t.amp;
    return v;
}

DensityOperator::DensityOperator(std::vector<int> dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    const std::size_t side = checked_side(dims_, 1);
    if (!matrix_.is_square() || matrix_.rows() != side)
        throw Error(Error::Kind::Shape, "density matrix side does not match dims");
}

void DensityOperator::validate() const {
    if (matrix_.hermiticity_defect() > 1e-10)
        throw Error(Error::Kind::Symmetry, "density operator not Hermitian within 1e-10");
    if (std::abs(matrix_.trace() - cplx(1.0, 0.0)) > 1e-10)
        throw Error(Error::Kind::Norm, "density operator trace differs from 1 beyond 1e-10");
    if (!is_psd_within(matrix_, 1e-9))
        throw Error(Error::Kind::Norm, "density operator has eigenvalue below -1e-9");
}

Bipartition::Bipartition(std::vector<int> left_in, std::vector<int> right_in)
    : left(std::move(left_in)), right(std::move(right_in)) {
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    if (left.empty() || right.empty())
        throw Error(Error::Kind::Arity, "bipartition groups must be non-empty");
    // canonical: subsystem 1 on the left
    if (right.front() < left.front()) std::swap(left, right);
    std::vector<int> all = left;
    all.insert(all.end(), right.begin(), right.end());
    std::sort(all.begin(), all.end());
    for (std::size_t s = 0; s < all.size(); ++s)
        if (all[s] != static_cast<int>(s) + 1)
            throw Error(Error::Kind::Index, "bipartition must partition {1..m}");
}

Bipartition Bipartition::from_left(const std::vector<int>& left, int m) {
    std::vector<int> right;
    for (int s = 1; s <= m; ++s)
        if (std::find(left.begin(), left.end(), s) == left.end()) right.push_back(s);
    return Bipartition(left, right);
}

std::vector<Bipartition> all_bipartitions(int m) {
    if (m < 2) throw Error(Error::Kind::Arity, "bipartitions need at least two subsystems");
    std::vector<Bipartition> out;
    const unsigned full = (1u << m) - 1u;
    for (unsigned mask = 1u; mask < full; ++mask) {
        if (!(mask & 1u)) continue;  // canonical: subsystem 1 on the left
        std::vector<int> left;
        for (int s = 0; s < m; ++s)
            if (mask & (1u << s)) left.push_back(s + 1);
        out.push_back(Bipartition::from_left(left, m));
    }
    return out;
}

PureState make_pure(std::vector<int> dims, std::vector<AmplitudeTerm> raw) {
    checked_side(dims, 2);
    for (auto& t : raw) {
        if (t.idx.size() != dims.size())
            throw Error(Error::Kind::Index, "amplitude index arity does not match dims");
        for (std::size_t s = 0; s < dims.size(); ++s)
            if (t.idx[s] < 1 || t.idx[s] > dims[s])
                throw Error(Error::Kind::Index, "basis index out of range");
    }
    std::sort(raw.begin(), raw.end(),
              [](const AmplitudeTerm& a, const AmplitudeTerm& b) { return a.idx < b.idx; });
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i].idx == raw[i - 1].idx)
            throw Error(Error::Kind::Input, "duplicate amplitude index");

    double norm_sq = 0.0;
    for (const auto& t : raw) norm_sq += std::norm(t.amp);
    if (norm_sq <= 0.0)
        throw Error(Error::Kind::Degenerate, "state has no nonzero amplitude");
    // already-normalized input passes through bit-exactly
    const double inv = (std::abs(norm_sq - 1.0) <= 1e-14) ? 1.0 : 1.0 / std::sqrt(norm_sq);

    std::vector<AmplitudeTerm> terms;
    terms.reserve(raw.size());
    for (auto& t : raw) {
        if (t.amp == cplx(0.0, 0.0)) continue;
        terms.push_back({std::move(t.idx), t.amp * inv});
    }
    return PureState(std::move(dims), std::move(terms));
}

DensityOperator to_density(const PureState& psi) {
    const std::size_t side = checked_side(psi.dims(), 2);
    ComplexMatrix rho(side, side);
    for (const auto& t1 : psi.terms()) {
        const std::size_t f = psi.flat_index(t1.idx);
        for (const auto& t2 : psi.terms())
            rho(f, psi.flat_index(t2.idx)) = t1.amp * std::conj(t2.amp);
    }
    return DensityOperator(psi.dims(), std::move(rho));
}

PureState random_pure(const std::vector<int>& dims, std::uint64_t seed) {
    const std::size_t side = checked_side(dims, 2);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> amps(side);
    for (std::size_t f = 0; f < side; ++f) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        amps[f] = cplx(re, im);
    }
    std::vector<AmplitudeTerm> terms;
    terms.reserve(side);
    std::vector<int> idx(dims.size(), 1);
    for (std::size_t f = 0; f < side; ++f) {
        terms.push_back({idx, amps[f]});
        for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
            if (++idx[s] <= dims[s]) break;
            idx[s] = 1;
        }
    }
    return make_pure(dims, std::move(terms));
}

PureState random_product(const std::vector<int>& dims, std::uint64_t seed) {
    checked_side(dims, 2);
    std::vector<std::vector<cplx>> factors;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        const PureState one = random_pure({dims[s]}, splitmix64(seed ^ splitmix64(s + 1)));
        factors.push_back(one.dense());
    }
    std::vector<AmplitudeTerm> terms;
    std::vector<int> idx(dims.size(), 1);
    const std::size_t side = checked_side(dims, 2);
    for (std::size_t f = 0; f < side; ++f) {
        cplx amp(1.0, 0.0);
        for (std::size_t s = 0; s < dims.size(); ++s) amp *= factors[s][idx[s] - 1];
        terms.push_back({idx, amp});
        for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
            if (++idx[s] <= dims[s]) break;
            idx[s] = 1;
        }
    }
    return make_pure(dims, std::move(terms));
}

DensityOperator mix(const std::vector<std::pair<double, DensityOperator>>& components) {
    if (components.empty())
        throw Error(Error::Kind::Probability, "mixture needs at least one component");
    double wsum = 0.0;
    for (const auto& [w, rho] : components) {
        if (w < 0.0) throw Error(Error::Kind::Probability, "negative mixture weight");
        if (rho.dims() != components.front().second.dims())
            throw Error(Error::Kind::Shape, "mixture components on different spaces");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw Error(Error::Kind::Probability, "mixture weights do not sum to 1");

    const std::size_t side = components.front().second.side();
    ComplexMatrix acc(side, side);
    for (const auto& [w, rho] : components)
        simd::scale_add(acc.data(), rho.matrix().data(), cplx(w, 0.0), acc.size());
    return DensityOperator(components.front().second.dims(), std::move(acc));
}

namespace {

// Dense left x right amplitude matrix of the regrouped state.
ComplexMatrix amplitude_matrix(const PureState& psi, const Bipartition& p) {
    std::size_t dl = 1, dr = 1;
    for (int s : p.left) dl *= static_cast<std::size_t>(psi.dims().at(s - 1));
    for (int s : p.right) dr *= static_cast<std::size_t>(psi.dims().at(s - 1));
    ComplexMatrix a(dl, dr);
    for (const auto& t : psi.terms()) {
        std::size_t u = 0, v = 0;
        for (int s : p.left) u = u * static_cast<std::size_t>(psi.dims()[s - 1]) +
                                 static_cast<std::size_t>(t.idx[s - 1] - 1);
        for (int s : p.right) v = v * static_cast<std::size_t>(psi.dims()[s - 1]) +
                                  static_cast<std::size_t>(t.idx[s - 1] - 1);
        a(u, v) = t.amp;
    }
    return a;
}

} // namespace

DensityOperator reduced(const PureState& psi, const Bipartition& p, Side side) {
    const int m = psi.subsystems();
    if (!p.left.empty() && (p.left.back() > m || p.right.back() > m))
        throw Error(Error::Kind::Index, "bipartition refers to missing subsystems");
    if (static_cast<int>(p.left.size() + p.right.size()) != m)
        throw Error(Error::Kind::Arity, "bipartition does not cover all subsystems");

    const ComplexMatrix a = amplitude_matrix(psi, p);
    std::vector<int> kept_dims;
    ComplexMatrix rho;
    if (side == Side::A) {
        rho = a * a.dagger();
        for (int s : p.left) kept_dims.push_back(psi.dims()[s - 1]);
    } else {
        const ComplexMatrix at = a.dagger().conj();  // transpose
        rho = at * at.dagger();
        for (int s : p.right) kept_dims.push_back(psi.dims()[s - 1]);
    }
    return DensityOperator(std::move(kept_dims), std::move(rho));
}

PureState regroup_pure(const PureState& psi, const Bipartition& p) {
    if (static_cast<int>(p.left.size() + p.right.size()) != psi.subsystems())
        throw Error(Error::Kind::Arity, "bipartition does not cover all subsystems");
    std::size_t dl = 1, dr = 1;
    for (int s : p.left) dl *= static_cast<std::size_t>(psi.dims()[s - 1]);
    for (int s : p.right) dr *= static_cast<std::size_t>(psi.dims()[s - 1]);

    std::vector<AmplitudeTerm> terms;
    terms.reserve(psi.terms().size());
    for (const auto& t : psi.terms()) {
        std::size_t u = 0, v = 0;
        for (int s : p.left) u = u * static_cast<std::size_t>(psi.dims()[s - 1]) +
                                 static_cast<std::size_t>(t.idx[s - 1] - 1);
        for (int s : p.right) v = v * static_cast<std::size_t>(psi.dims()[s - 1]) +
                                  static_cast<std::size_t>(t.idx[s - 1] - 1);
        terms.push_back({{static_cast<int>(u) + 1, static_cast<int>(v) + 1}, t.amp});
    }
    return make_pure({static_cast<int>(dl), static_cast<int>(dr)}, std::move(terms));
}

DensityOperator regroup_density(const DensityOperator& rho, const Bipartition& p) {
    const int m = rho.subsystems();
    if (static_cast<int>(p.left.size() + p.right.size()) != m)
        throw Error(Error::Kind::Arity, "bipartition does not cover all subsystems");
    const std::size_t side = rho.side();

    std::size_t dl = 1, dr = 1;
    for (int s : p.left) dl *= static_cast<std::size_t>(rho.dims()[s - 1]);
    for (int s : p.right) dr *= static_cast<std::size_t>(rho.dims()[s - 1]);

    // strides of original row-major layout
    std::vector<std::size_t> stride(m, 1);
    for (int s = m - 2; s >= 0; --s)
        stride[s] = stride[s + 1] * static_cast<std::size_t>(rho.dims()[s + 1]);

    std::vector<std::size_t> perm(side);
    for (std::size_t f = 0; f < side; ++f) {
        std::size_t u = 0, v = 0;
        for (int s : p.left) {
            const std::size_t digit = (f / stride[s - 1]) % static_cast<std::size_t>(rho.dims()[s - 1]);
            u = u * static_cast<std::size_t>(rho.dims()[s - 1]) + digit;
        }
        for (int s : p.right) {
            const std::size_t digit = (f / stride[s - 1]) % static_cast<std::size_t>(rho.dims()[s - 1]);
            v = v * static_cast<std::size_t>(rho.dims()[s - 1]) + digit;
        }
        perm[f] = u * dr + v;
    }

    ComplexMatrix out(side, side);
    for (std::size_t f = 0; f < side; ++f)
        for (std::size_t g = 0; g < side; ++g)
            out(perm[f], perm[g]) = rho.matrix()(f, g);
    return DensityOperator({static_cast<int>(dl), static_cast<int>(dr)}, std::move(out));
}

// --- JSON state files ---

namespace {

json cplx_pair(const cplx& v) { return json::array({v.real(), v.imag()}); }

LoadedState parse_state(const json& j) {
    LoadedState out;
    if (!j.is_object() || !j.contains("kind") || !j.contains("dims"))
        throw Error(Error::Kind::Input, "state file missing kind/dims");
    const std::string kind = j.at("kind").get<std::string>();
    out.dims = j.at("dims").get<std::vector<int>>();

    if (kind == "pure") {
        out.is_pure = true;
        if (!j.contains("amplitudes") || !j.at("amplitudes").is_array())
            throw Error(Error::Kind::Input, "pure state needs an amplitudes array");
        double norm_sq = 0.0;
        for (const auto& e : j.at("amplitudes")) {
            AmplitudeTerm t;
            t.idx = e.at("idx").get<std::vector<int>>();
            t.amp = cplx(e.at("re").get<double>(), e.at("im").get<double>());
            norm_sq += std::norm(t.amp);
            out.terms.push_back(std::move(t));
        }
        {
            auto sorted = out.terms;
            std::sort(sorted.begin(), sorted.end(),
                      [](const AmplitudeTerm& a, const AmplitudeTerm& b) { return a.idx < b.idx; });
            for (std::size_t i = 1; i < sorted.size(); ++i)
                if (sorted[i].idx == sorted[i - 1].idx)
                    throw Error(Error::Kind::Input, "duplicate idx entry in state file");
        }
        // sub-1e-6 deviations are serialization rounding and renormalize silently
        if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-6)
            throw Error(Error::Kind::Norm, "pure state norm deviates from 1 by more than 1e-6");
    } else if (kind == "mixed") {
        out.is_pure = false;
        const auto& jm = j.at("matrix");
        const std::size_t side = jm.at("side").get<std::size_t>();
        const auto& entries = jm.at("entries");
        if (!entries.is_array() || entries.size() != side * side)
            throw Error(Error::Kind::Input, "matrix entries length must be side^2");
        out.matrix = ComplexMatrix(side, side);
        for (std::size_t f = 0; f < side * side; ++f) {
            const auto& e = entries.at(f);
            if (!e.is_array() || e.size() != 2)
                throw Error(Error::Kind::Input, "matrix entry must be [re, im]");
            out.matrix.data()[f] = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    } else {
        throw Error(Error::Kind::Input, "unknown state kind: " + kind);
    }
    return out;
}

} // namespace

PureState LoadedState::as_pure() const {
    if (!is_pure) throw Error(Error::Kind::Input, "state is not pure");
    return make_pure(dims, terms);
}

DensityOperator LoadedState::as_density() const {
    if (is_pure) return to_density(make_pure(dims, terms));
    return DensityOperator(dims, matrix);
}

LoadedState parse_state_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::Input, std::string("invalid JSON: ") + e.what());
    }
    try {
        return parse_state(j);
    } catch (const json::exception& e) {
        throw Error(Error::Kind::Input, std::string("bad state schema: ") + e.what());
    }
}

LoadedState load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::Input, "cannot open state file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_state_json(ss.str());
}

std::string serialize_state(const PureState& psi) {
    json j;
    j["kind"] = "pure";
    j["dims"] = psi.dims();
    json amps = json::array();
    for (const auto& t : psi.terms()) {
        json e;
        e["idx"] = t.idx;
        e["re"] = t.amp.real();
        e["im"] = t.amp.imag();
        amps.push_back(std::move(e));
    }
    j["amplitudes"] = std::move(amps);
    return j.dump();
}

std::string serialize_state(const DensityOperator& rho) {
    json j;
    j["kind"] = "mixed";
    j["dims"] = rho.dims();
    json jm;
    jm["side"] = rho.side();
    json entries = json::array();
    for (std::size_t f = 0; f < rho.matrix().size(); ++f)
        entries.push_back(cplx_pair(rho.matrix().data()[f]));
    jm["entries"] = std::move(entries);
    j["matrix"] = std::move(jm);
    return j.dump();
}

} // namespace chshcert
