#include "qcorr/channels.hpp"

#include <cmath>
#include <string>

namespace qcorr {

AffineQubitChannel validate_affine(const std::array<double, 3>& t,
                                   const std::array<double, 3>& lambda) {
    for (std::size_t k = 0; k < 3; ++k) {
        if (std::abs(t[k]) > 1.0) {
            throw ValidityError("affine channel: |t_" + std::to_string(k + 1) + "| = " +
                                std::to_string(std::abs(t[k])) + " exceeds 1");
        }
        if (std::abs(lambda[k]) > 1.0 - std::abs(t[k])) {
            throw ValidityError("affine channel: |lambda_" + std::to_string(k + 1) + "| = " +
                                std::to_string(std::abs(lambda[k])) + " exceeds 1 - |t_" +
                                std::to_string(k + 1) + "| = " +
                                std::to_string(1.0 - std::abs(t[k])));
        }
    }
    return AffineQubitChannel{t, lambda};
}

IsotropicChannel make_isotropic(double p, GammaKind kind, ComplexMatrix U) {
    if (!U.is_square() || U.rows() < 2) {
        throw DimensionError("isotropic channel: U must be square with d >= 2");
    }
    const auto d = static_cast<double>(U.rows());
    const double lo = (kind == GammaKind::Unitary) ? -1.0 / (d * d - 1.0) : -1.0 / (d - 1.0);
    const double hi = (kind == GammaKind::Unitary) ? 1.0 : 1.0 / (d + 1.0);
    if (p < lo - 1e-15 || p > hi + 1e-15) {
        throw ValidityError("isotropic channel: p = " + std::to_string(p) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] for this kind at d = " + std::to_string(U.rows()));
    }
    const double defect = unitarity_defect(U);
    if (defect > 1e-10) {
        throw ValidityError("isotropic channel: U not unitary (defect " +
                            std::to_string(defect) + ")");
    }
    const std::size_t dim = U.rows();
    return IsotropicChannel{p, kind, std::move(U), dim};
}

DecoheringChannel make_decohering(std::vector<ComplexMatrix> basis) {
    const std::size_t d = basis.size();
    if (d == 0) throw DimensionError("decohering channel: empty basis");
    for (std::size_t i = 0; i < d; ++i) {
        if (basis[i].rows() != d || basis[i].cols() != 1) {
            throw DimensionError("decohering channel: basis vectors must be d x 1 columns");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            cdouble dot = 0.0;
            for (std::size_t r = 0; r < d; ++r) dot += std::conj(basis[j](r, 0)) * basis[i](r, 0);
            const cdouble expected = (i == j) ? cdouble(1.0) : cdouble(0.0);
            if (std::abs(dot - expected) > 1e-10) {
                throw ValidityError("decohering channel: basis not orthonormal (|<v_" +
                                    std::to_string(j) + "|v_" + std::to_string(i) +
                                    "> - delta| = " + std::to_string(std::abs(dot - expected)) +
                                    ")");
            }
        }
    }
    return DecoheringChannel{std::move(basis)};
}

KrausChannel make_kraus(std::vector<ComplexMatrix> ops) {
    if (ops.empty()) throw DimensionError("kraus channel: no operators");
    const std::size_t d_in = ops.front().cols();
    const std::size_t d_out = ops.front().rows();
    ComplexMatrix sum(d_in, d_in);
    for (const auto& k : ops) {
        if (k.rows() != d_out || k.cols() != d_in) {
            throw DimensionError("kraus channel: operators have mismatched shapes");
        }
        sum += dagger(k) * k;
    }
    const double defect = sum.max_abs_diff(ComplexMatrix::identity(d_in));
    if (defect > 1e-10) {
        throw ValidityError("kraus channel: not trace-preserving (|sum K^dagger K - I| = " +
                            std::to_string(defect) + ")");
    }
    return KrausChannel{std::move(ops)};
}

ComplexMatrix apply_affine(const AffineQubitChannel& ch, const ComplexMatrix& m) {
    PauliVector d = pauli_decompose(m);
    PauliVector out;
    out[0] = d[0];
    for (std::size_t k = 1; k <= 3; ++k) {
        out[k] = ch.t[k - 1] * d[0] + ch.lambda[k - 1] * d[k];
    }
    return pauli_reconstruct(out);
}

ComplexMatrix apply_isotropic(const IsotropicChannel& ch, const ComplexMatrix& m) {
    if (!m.is_square() || m.rows() != ch.d) {
        throw DimensionError("apply_isotropic: input is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", channel dimension " +
                             std::to_string(ch.d));
    }
    const ComplexMatrix& g = (ch.kind == GammaKind::Unitary) ? m : transpose(m);
    ComplexMatrix out = ch.U * g * dagger(ch.U);
    out *= cdouble(ch.p);
    const cdouble mix = (1.0 - ch.p) * m.trace() / static_cast<double>(ch.d);
    for (std::size_t i = 0; i < ch.d; ++i) out(i, i) += mix;
    return out;
}

ComplexMatrix apply_decohering(const DecoheringChannel& ch, const ComplexMatrix& m) {
    const std::size_t d = ch.basis.size();
    if (!m.is_square() || m.rows() != d) {
        throw DimensionError("apply_decohering: input is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", channel dimension " +
                             std::to_string(d));
    }
    ComplexMatrix out(d, d);
    for (const auto& v : ch.basis) {
        // <v|M|v> |v><v|
        cdouble diag = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                diag += std::conj(v(r, 0)) * m(r, c) * v(c, 0);
            }
        }
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                out(r, c) += diag * v(r, 0) * std::conj(v(c, 0));
            }
        }
    }
    return out;
}

ComplexMatrix apply_kraus(const KrausChannel& ch, const ComplexMatrix& m) {
    if (!m.is_square() || m.rows() != ch.d_in()) {
        throw DimensionError("apply_kraus: input is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", channel input dimension " +
                             std::to_string(ch.d_in()));
    }
    ComplexMatrix out(ch.d_out(), ch.d_out());
    for (const auto& k : ch.ops) {
        out += k * m * dagger(k);
    }
    return out;
}

ComplexMatrix apply_channel(const ChannelSpec& ch, const ComplexMatrix& m) {
    struct Visitor {
        const ComplexMatrix& m;
        ComplexMatrix operator()(const AffineQubitChannel& c) const { return apply_affine(c, m); }
        ComplexMatrix operator()(const IsotropicChannel& c) const { return apply_isotropic(c, m); }
        ComplexMatrix operator()(const DecoheringChannel& c) const {
            return apply_decohering(c, m);
        }
        ComplexMatrix operator()(const KrausChannel& c) const { return apply_kraus(c, m); }
    };
    return std::visit(Visitor{m}, ch);
}

std::size_t channel_dim_in(const ChannelSpec& ch) {
    struct Visitor {
        std::size_t operator()(const AffineQubitChannel&) const { return 2; }
        std::size_t operator()(const IsotropicChannel& c) const { return c.d; }
        std::size_t operator()(const DecoheringChannel& c) const { return c.basis.size(); }
        std::size_t operator()(const KrausChannel& c) const { return c.d_in(); }
    };
    return std::visit(Visitor{}, ch);
}

ComplexMatrix choi_matrix(const ChannelSpec& ch) {
    const std::size_t d = channel_dim_in(ch);
    ComplexMatrix choi(d * d, d * d);  // d_out == d_in for every supported class
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const ComplexMatrix block = apply_channel(ch, ComplexMatrix::matrix_unit(d, i, j));
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    choi(i * d + a, j * d + b) = block(a, b);
                }
            }
        }
    }
    return choi;
}

KrausChannel channel_to_kraus(const ChannelSpec& ch) {
    if (const auto* already = std::get_if<KrausChannel>(&ch)) {
        return *already;  // Kraus form is the target representation
    }
    const std::size_t d = channel_dim_in(ch);
    const ComplexMatrix choi = choi_matrix(ch);
    const EigenSystem es = eig_hermitian_full(choi);
    std::vector<ComplexMatrix> ops;
    for (std::size_t m = 0; m < es.values.size(); ++m) {
        const double lambda = es.values[m];
        if (lambda < -1e-10) {
            throw ValidityError("channel is positive but not completely positive "
                                "(Choi eigenvalue " + std::to_string(lambda) + ")");
        }
        if (lambda < 1e-12) continue;
        const double scale = std::sqrt(lambda);
        ComplexMatrix k(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t a = 0; a < d; ++a) {
                k(a, i) = scale * es.vectors(i * d + a, m);
            }
        }
        ops.push_back(std::move(k));
    }
    return make_kraus(std::move(ops));
}

BipartiteState apply_local(const KrausChannel& ch, const BipartiteState& state, Subsystem side) {
    const std::size_t target = (side == Subsystem::A) ? state.dA : state.dB;
    if (ch.d_in() != target || ch.d_out() != target) {
        throw DimensionError("apply_local: channel dimension " + std::to_string(ch.d_in()) +
                             " does not match subsystem dimension " + std::to_string(target));
    }
    const std::size_t d = state.dA * state.dB;
    ComplexMatrix out(d, d);
    const ComplexMatrix eyeA = ComplexMatrix::identity(state.dA);
    const ComplexMatrix eyeB = ComplexMatrix::identity(state.dB);
    for (const auto& k : ch.ops) {
        const ComplexMatrix lifted = (side == Subsystem::A) ? kron(k, eyeB) : kron(eyeA, k);
        out += lifted * state.rho * dagger(lifted);
    }
    return BipartiteState{state.dA, state.dB, std::move(out)};
}

namespace {

bool choi_is_psd(const ChannelSpec& ch) {
    const auto eigs = eig_hermitian(choi_matrix(ch));
    return eigs.empty() || eigs.front() >= -1e-10;
}

constexpr int kSamplerBudget = 10000;

}  // namespace

AffineQubitChannel random_unital_qubit_channel(Rng& rng) {
    for (int attempt = 0; attempt < kSamplerBudget; ++attempt) {
        std::array<double, 3> lambda;
        for (auto& l : lambda) l = rng.uniform(-1.0, 1.0);
        AffineQubitChannel ch{{0.0, 0.0, 0.0}, lambda};
        if (choi_is_psd(ChannelSpec{ch})) return ch;
    }
    throw SamplerError("random_unital_qubit_channel: rejection budget exhausted");
}

AffineQubitChannel random_unital_qubit_channel(std::uint64_t seed) {
    Rng rng(seed);
    return random_unital_qubit_channel(rng);
}

AffineQubitChannel random_affine_qubit_channel(Rng& rng) {
    for (int attempt = 0; attempt < kSamplerBudget; ++attempt) {
        std::array<double, 3> t;
        std::array<double, 3> lambda;
        for (auto& v : t) v = rng.uniform(-1.0, 1.0);
        for (std::size_t k = 0; k < 3; ++k) {
            const double bound = 1.0 - std::abs(t[k]);
            lambda[k] = rng.uniform(-bound, bound);
        }
        AffineQubitChannel ch{t, lambda};
        if (choi_is_psd(ChannelSpec{ch})) return ch;
    }
    throw SamplerError("random_affine_qubit_channel: rejection budget exhausted");
}

AffineQubitChannel random_affine_qubit_channel(std::uint64_t seed) {
    Rng rng(seed);
    return random_affine_qubit_channel(rng);
}

IsotropicChannel random_isotropic(Rng& rng, std::size_t d, GammaKind kind) {
    const auto dd = static_cast<double>(d);
    const double lo = (kind == GammaKind::Unitary) ? -1.0 / (dd * dd - 1.0) : -1.0 / (dd - 1.0);
    const double hi = (kind == GammaKind::Unitary) ? 1.0 : 1.0 / (dd + 1.0);
    const double p = rng.uniform(lo, hi);
    return make_isotropic(p, kind, random_unitary(rng, d));
}

IsotropicChannel random_isotropic(std::uint64_t seed, std::size_t d, GammaKind kind) {
    Rng rng(seed);
    return random_isotropic(rng, d, kind);
}

DecoheringChannel random_decohering(Rng& rng, std::size_t d) {
    const ComplexMatrix u = random_unitary(rng, d);
    std::vector<ComplexMatrix> basis;
    basis.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        ComplexMatrix v(d, 1);
        for (std::size_t r = 0; r < d; ++r) v(r, 0) = u(r, j);
        basis.push_back(std::move(v));
    }
    return make_decohering(std::move(basis));
}

DecoheringChannel random_decohering(std::uint64_t seed, std::size_t d) {
    Rng rng(seed);
    return random_decohering(rng, d);
}

KrausChannel random_kraus_channel(Rng& rng, std::size_t d, std::size_t num_ops) {
    if (num_ops == 0) throw DimensionError("random_kraus_channel: need at least one operator");
    // Columns of a Haar isometry V: (d*num_ops) x d; K_m rows are the m-th
    // block of V, so sum K^dagger K = V^dagger V = I.
    ComplexMatrix g(d * num_ops, d);
    for (auto& e : g.data()) e = rng.complex_gaussian();
    orthonormalize_columns(g);
    std::vector<ComplexMatrix> ops;
    ops.reserve(num_ops);
    for (std::size_t m = 0; m < num_ops; ++m) {
        ComplexMatrix k(d, d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                k(r, c) = g(m * d + r, c);
            }
        }
        ops.push_back(std::move(k));
    }
    return make_kraus(std::move(ops));
}

KrausChannel random_kraus_channel(std::uint64_t seed, std::size_t d, std::size_t num_ops) {
    Rng rng(seed);
    return random_kraus_channel(rng, d, num_ops);
}

}  // namespace qcorr
