#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcorr/campaign.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace py = pybind11;

namespace {

using namespace qcorr;

using NpComplex =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const NpComplex& arr) {
    if (arr.ndim() != 2) throw DimensionError("expected a 2-D complex array");
    ComplexMatrix m(static_cast<std::size_t>(arr.shape(0)),
                    static_cast<std::size_t>(arr.shape(1)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) {
        for (py::ssize_t j = 0; j < arr.shape(1); ++j) {
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
        }
    }
    return m;
}

py::array_t<std::complex<double>> to_numpy(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
    auto w = arr.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            w(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
        }
    }
    return arr;
}

BipartiteState to_state(const NpComplex& rho, std::size_t dA, std::size_t dB) {
    return BipartiteState{dA, dB, to_matrix(rho)};
}

GammaKind parse_kind(const std::string& kind) {
    if (kind == "unitary") return GammaKind::Unitary;
    if (kind == "antiunitary") return GammaKind::Antiunitary;
    throw ConfigError("kind must be \"unitary\" or \"antiunitary\"");
}

Subsystem parse_side(const std::string& side) {
    if (side == "A") return Subsystem::A;
    if (side == "B") return Subsystem::B;
    throw ConfigError("side must be \"A\" or \"B\"");
}

BellDiagonalCoeffs parse_coeffs(const std::array<double, 3>& c) {
    return BellDiagonalCoeffs{{c[0], c[1], c[2]}};
}

std::vector<py::array_t<std::complex<double>>> kraus_to_list(const KrausChannel& ch) {
    std::vector<py::array_t<std::complex<double>>> out;
    out.reserve(ch.ops.size());
    for (const auto& k : ch.ops) out.push_back(to_numpy(k));
    return out;
}

KrausChannel list_to_kraus(const std::vector<NpComplex>& ops) {
    std::vector<ComplexMatrix> mats;
    mats.reserve(ops.size());
    for (const auto& op : ops) mats.push_back(to_matrix(op));
    return make_kraus(std::move(mats));
}

}  // namespace

PYBIND11_MODULE(_qcorr, m) {
    m.doc() = "non-commutativity measures of bipartite quantum correlations";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SamplerError>(m, "SamplerError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "validate_state",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB) {
            validate_state(to_state(rho, dA, dB));
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"),
        "Raise ValueError unless rho is a valid dA*dB density matrix.");

    m.def(
        "guo_D",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB,
           const std::optional<NpComplex>& basis, bool fast) {
            const BipartiteState state = to_state(rho, dA, dB);
            if (basis) return guo_D(state, to_matrix(*basis), fast).value;
            return guo_D(state, fast).value;
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("basis") = py::none(),
        py::arg("fast") = true,
        "Sum of commutator norms over unordered block pairs in the given B-basis "
        "(computational basis when omitted).");

    m.def(
        "minimize_d",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB, std::size_t grid_points,
           std::size_t restarts, std::uint64_t seed) {
            MinimizerConfig config;
            config.grid_points = grid_points;
            config.restarts = restarts;
            config.seed = seed;
            const MinimizationReport report = minimize_d(to_state(rho, dA, dB), config);
            py::dict out;
            out["d_value"] = report.d_value;
            out["evaluations"] = report.evaluations;
            out["converged"] = report.converged;
            out["basis"] = to_numpy(report.optimal_basisU);
            return out;
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("grid_points") = 24,
        py::arg("restarts") = 32, py::arg("seed") = 0x5eedf00dULL,
        "Minimum of guo_D over B-bases; returns d_value, evaluations, converged, basis.");

    m.def(
        "bell_diagonal_D",
        [](const std::array<double, 3>& c) { return bell_diagonal_D(parse_coeffs(c)); },
        py::arg("c"), "Closed-form measure for a Bell-diagonal state.");

    m.def(
        "bell_diagonal_state",
        [](const std::array<double, 3>& c) {
            return to_numpy(bell_diagonal_state(parse_coeffs(c)).rho);
        },
        py::arg("c"), "Density matrix (I(x)I + sum_k c_k sigma_k(x)sigma_k)/4.");

    m.def(
        "random_bell_diagonal",
        [](std::uint64_t seed) {
            const BellDiagonalCoeffs c = random_bell_diagonal(seed);
            return py::make_tuple(c.c[0], c.c[1], c.c[2]);
        },
        py::arg("seed"), "Uniform coefficients from the Bell-diagonal tetrahedron.");

    m.def(
        "random_mixed_state",
        [](std::size_t dA, std::size_t dB, std::uint64_t seed, std::size_t rank) {
            return to_numpy(random_mixed_state(seed, dA, dB, rank).rho);
        },
        py::arg("dA"), py::arg("dB"), py::arg("seed"), py::arg("rank") = 0,
        "Ginibre-induced mixed state (rank 0 = full).");

    m.def(
        "random_pure_state",
        [](std::size_t dA, std::size_t dB, std::uint64_t seed) {
            return to_numpy(random_pure_state(seed, dA, dB).rho);
        },
        py::arg("dA"), py::arg("dB"), py::arg("seed"), "Haar-random pure-state projector.");

    m.def(
        "random_unitary",
        [](std::size_t d, std::uint64_t seed) { return to_numpy(random_unitary(seed, d)); },
        py::arg("d"), py::arg("seed"), "Haar-distributed unitary.");

    m.def(
        "affine_kraus",
        [](const std::array<double, 3>& t, const std::array<double, 3>& lam) {
            return kraus_to_list(channel_to_kraus(ChannelSpec{validate_affine(t, lam)}));
        },
        py::arg("t"), py::arg("lam"),
        "Kraus operators of the qubit channel m0 -> m0, m_k -> t_k m0 + lam_k m_k.");

    m.def(
        "isotropic_kraus",
        [](double p, const std::string& kind, const NpComplex& U) {
            return kraus_to_list(
                channel_to_kraus(ChannelSpec{make_isotropic(p, parse_kind(kind), to_matrix(U))}));
        },
        py::arg("p"), py::arg("kind"), py::arg("U"),
        "Kraus operators of p*Gamma[rho] + (1-p) I/d tr(rho).");

    m.def(
        "decohering_kraus",
        [](const NpComplex& basis_columns) {
            const ComplexMatrix u = to_matrix(basis_columns);
            std::vector<ComplexMatrix> basis;
            basis.reserve(u.cols());
            for (std::size_t j = 0; j < u.cols(); ++j) {
                ComplexMatrix v(u.rows(), 1);
                for (std::size_t r = 0; r < u.rows(); ++r) v(r, 0) = u(r, j);
                basis.push_back(std::move(v));
            }
            return kraus_to_list(channel_to_kraus(ChannelSpec{make_decohering(std::move(basis))}));
        },
        py::arg("basis_columns"),
        "Kraus operators of the map that keeps only the diagonal in the basis given by "
        "the columns of the argument.");

    m.def(
        "apply_local",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB,
           const std::vector<NpComplex>& kraus_ops, const std::string& side) {
            const BipartiteState out =
                apply_local(list_to_kraus(kraus_ops), to_state(rho, dA, dB), parse_side(side));
            return to_numpy(out.rho);
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("kraus_ops"), py::arg("side"),
        "Apply a Kraus channel to one side of a bipartite state.");

    m.def(
        "isotropic_scaling_check",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB, double p, const NpComplex& U,
           const std::string& kind) {
            const ScalingCheck check =
                isotropic_scaling_check(to_state(rho, dA, dB), p, to_matrix(U), parse_kind(kind));
            return py::make_tuple(check.lhs, check.rhs, check.discrepancy);
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("p"), py::arg("U"),
        py::arg("kind"), "Returns (measure after, p^2 * reference, |difference|).");

    m.def(
        "basis_dependence_probe",
        [](const NpComplex& rho, std::size_t dA, std::size_t dB, std::size_t samples,
           std::uint64_t seed) {
            const BasisProbe probe =
                basis_dependence_probe(to_state(rho, dA, dB), samples, seed);
            py::dict out;
            out["min"] = probe.min;
            out["max"] = probe.max;
            out["mean"] = probe.mean;
            out["stddev"] = probe.stddev;
            out["samples"] = probe.samples;
            return out;
        },
        py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("samples"), py::arg("seed"),
        "Distribution of the fixed-basis measure over Haar-random B-bases.");
}
