#include "qcorr/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qcorr/parallel.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

ComplexMatrix basis_unitary_2(double theta, double phi, double psi) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    ComplexMatrix u(2, 2);
    u(0, 0) = ct * std::exp(cdouble(0.0, phi));
    u(0, 1) = st * std::exp(cdouble(0.0, psi));
    u(1, 0) = -st * std::exp(cdouble(0.0, -psi));
    u(1, 1) = ct * std::exp(cdouble(0.0, -phi));
    return u;
}

BlockDecomposition block_decompose(const BipartiteState& state, const ComplexMatrix& basisU) {
    const std::size_t dA = state.dA, dB = state.dB;
    if (state.rho.rows() != dA * dB || !state.rho.is_square()) {
        throw DimensionError("block_decompose: state matrix does not match dA*dB");
    }
    if (basisU.rows() != dB || basisU.cols() != dB) {
        throw DimensionError("block_decompose: basis must be dB x dB");
    }
    const double defect = unitarity_defect(basisU);
    if (defect > 1e-10) {
        throw ValidityError("block_decompose: basis not unitary (defect " +
                            std::to_string(defect) + ")");
    }
    BlockDecomposition bd;
    bd.dA = dA;
    bd.dB = dB;
    bd.basisU = basisU;
    bd.blocks.assign(dB * dB, ComplexMatrix(dA, dA));
    // A_ij[a,a'] = sum_{b,b'} conj(U[b,i]) rho[(a,b),(a',b')] U[b',j]
    for (std::size_t i = 0; i < dB; ++i) {
        for (std::size_t j = 0; j < dB; ++j) {
            ComplexMatrix& blk = bd.blocks[i * dB + j];
            for (std::size_t a = 0; a < dA; ++a) {
                for (std::size_t ap = 0; ap < dA; ++ap) {
                    cdouble acc = 0.0;
                    for (std::size_t b = 0; b < dB; ++b) {
                        const cdouble ui = std::conj(basisU(b, i));
                        if (ui == cdouble{}) continue;
                        for (std::size_t bp = 0; bp < dB; ++bp) {
                            acc += ui * state.rho(a * dB + b, ap * dB + bp) * basisU(bp, j);
                        }
                    }
                    blk(a, ap) = acc;
                }
            }
        }
    }
    return bd;
}

MeasureResult guo_D(const BipartiteState& state, const ComplexMatrix& basisU, bool fast) {
    const BlockDecomposition bd = block_decompose(state, basisU);
    const std::size_t n = bd.dB * bd.dB;
    MeasureResult result;
    result.basisU = basisU;
    result.pair_count = n * (n - 1) / 2;
    double total = 0.0;
    if (fast && bd.dA == 2) {
        std::vector<PauliVector> pv(n);
        for (std::size_t p = 0; p < n; ++p) pv[p] = pauli_decompose(bd.blocks[p]);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                total += commutator_norm_pauli(pv[p], pv[q]);
            }
        }
    } else {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                total += hs_norm(commutator(bd.blocks[p], bd.blocks[q]));
            }
        }
    }
    result.value = total;
    return result;
}

MeasureResult guo_D(const BipartiteState& state, bool fast) {
    return guo_D(state, ComplexMatrix::identity(state.dB), fast);
}

double bell_diagonal_D(const BellDiagonalCoeffs& coeffs) {
    const double c1 = coeffs.c[0], c2 = coeffs.c[1], c3 = coeffs.c[2];
    const std::array<double, 4> spectrum = {
        (1.0 - c1 - c2 - c3) / 4.0,
        (1.0 - c1 + c2 + c3) / 4.0,
        (1.0 + c1 - c2 + c3) / 4.0,
        (1.0 + c1 + c2 - c3) / 4.0,
    };
    for (double lambda : spectrum) {
        if (lambda < -1e-12) {
            throw ValidityError("bell_diagonal_D: coefficients give eigenvalue " +
                                std::to_string(lambda));
        }
    }
    // s[m][i*2+j] = <i|sigma_m|j> in the computational basis.
    std::array<std::array<cdouble, 4>, 4> s{};
    for (std::size_t m = 1; m <= 3; ++m) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                s[m][i * 2 + j] = pauli(m)(i, j);
            }
        }
    }
    const double w12 = (c1 * c2) * (c1 * c2);
    const double w31 = (c3 * c1) * (c3 * c1);
    const double w23 = (c2 * c3) * (c2 * c3);
    double total = 0.0;
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t q = p + 1; q < 4; ++q) {
            const cdouble a12 = s[1][p] * s[2][q] - s[2][p] * s[1][q];
            const cdouble a31 = s[3][p] * s[1][q] - s[1][p] * s[3][q];
            const cdouble a23 = s[2][p] * s[3][q] - s[3][p] * s[2][q];
            const double inner =
                (w12 * std::norm(a12) + w31 * std::norm(a31) + w23 * std::norm(a23)) / 32.0;
            total += std::sqrt(inner);
        }
    }
    return total;
}

namespace {

/// Evaluates D for candidate B-bases of a fixed state by recombining the
/// computational-basis blocks: A_ij = sum_{kl} conj(U[k,i]) U[l,j] B_kl.
/// Specialized Pauli arithmetic when dA == 2, explicit commutators
/// otherwise. Keeps the minimizer's inner loop allocation-light.
class BlockRecombiner {
  public:
    explicit BlockRecombiner(const BipartiteState& state)
        : dA_(state.dA), dB_(state.dB), pauli_path_(state.dA == 2) {
        const std::size_t n = dB_ * dB_;
        base_.reserve(n);
        for (std::size_t k = 0; k < dB_; ++k) {
            for (std::size_t l = 0; l < dB_; ++l) {
                ComplexMatrix blk(dA_, dA_);
                for (std::size_t a = 0; a < dA_; ++a) {
                    for (std::size_t ap = 0; ap < dA_; ++ap) {
                        blk(a, ap) = state.rho(a * dB_ + k, ap * dB_ + l);
                    }
                }
                base_.push_back(std::move(blk));
            }
        }
        if (pauli_path_) {
            base_pv_.resize(n);
            for (std::size_t p = 0; p < n; ++p) base_pv_[p] = pauli_decompose(base_[p]);
        }
    }

    std::size_t dB() const { return dB_; }

    double operator()(const ComplexMatrix& u) const {
        const std::size_t n = dB_ * dB_;
        if (pauli_path_) {
            std::vector<PauliVector> pv(n);
            for (std::size_t i = 0; i < dB_; ++i) {
                for (std::size_t j = 0; j < dB_; ++j) {
                    PauliVector& out = pv[i * dB_ + j];
                    for (std::size_t k = 0; k < dB_; ++k) {
                        const cdouble uk = std::conj(u(k, i));
                        if (uk == cdouble{}) continue;
                        for (std::size_t l = 0; l < dB_; ++l) {
                            const cdouble w = uk * u(l, j);
                            const PauliVector& src = base_pv_[k * dB_ + l];
                            for (std::size_t m = 0; m < 4; ++m) out[m] += w * src[m];
                        }
                    }
                }
            }
            double total = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q)
                    total += commutator_norm_pauli(pv[p], pv[q]);
            return total;
        }
        std::vector<ComplexMatrix> blocks(n, ComplexMatrix(dA_, dA_));
        for (std::size_t i = 0; i < dB_; ++i) {
            for (std::size_t j = 0; j < dB_; ++j) {
                ComplexMatrix& out = blocks[i * dB_ + j];
                for (std::size_t k = 0; k < dB_; ++k) {
                    const cdouble uk = std::conj(u(k, i));
                    if (uk == cdouble{}) continue;
                    for (std::size_t l = 0; l < dB_; ++l) {
                        const cdouble w = uk * u(l, j);
                        const auto& src = base_[k * dB_ + l].data();
                        auto& dst = out.data();
                        for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += w * src[e];
                    }
                }
            }
        }
        double total = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                total += hs_norm(commutator(blocks[p], blocks[q]));
        return total;
    }

    /// dB == 2 only: evaluate at the angle parametrization.
    double eval_angles(double theta, double phi, double psi) const {
        return (*this)(basis_unitary_2(theta, phi, psi));
    }

  private:
    std::size_t dA_;
    std::size_t dB_;
    bool pauli_path_;
    std::vector<ComplexMatrix> base_;
    std::vector<PauliVector> base_pv_;
};

/// Makes the first nonzero entry of each column real nonnegative; leaves
/// the measure unchanged (per-column rephasing invariance).
void fix_column_phases(ComplexMatrix& u) {
    for (std::size_t j = 0; j < u.cols(); ++j) {
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const double mag = std::abs(u(i, j));
            if (mag > 1e-14) {
                const cdouble phase = std::conj(u(i, j)) / mag;
                for (std::size_t r = 0; r < u.rows(); ++r) u(r, j) *= phase;
                break;
            }
        }
    }
}

struct Candidate {
    double value = 0.0;
    std::size_t index = 0;  // linear grid index (tie-break: lowest wins)
};

void maybe_parallel_for(bool parallel, std::size_t count, const std::function<void(std::size_t)>& body) {
    if (parallel) {
        parallel_for(count, body);
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

MinimizationReport minimize_two_level_b(const BipartiteState& state,
                                        const MinimizerConfig& config) {
    const BlockRecombiner eval(state);
    MinimizationReport report;

    // Identity is grid point (0, 0, 0); checking it first lets states that
    // are already block-commuting (classical-quantum, products) return
    // without a scan.
    const double at_identity = eval.eval_angles(0.0, 0.0, 0.0);
    report.evaluations = 1;
    report.history.push_back({{0.0, 0.0, 0.0}, at_identity});
    if (at_identity < config.early_stop_below) {
        report.d_value = at_identity;
        report.optimal_basisU = ComplexMatrix::identity(2);
        report.converged = true;
        return report;
    }

    const std::size_t g = config.grid_points;
    constexpr double kHalfPi = 1.5707963267948966;
    constexpr double kTwoPi = 6.283185307179586;
    const double dtheta = kHalfPi / static_cast<double>(g - 1);
    const double dangle = kTwoPi / static_cast<double>(g);

    // Grid scan, one slice per theta value; each slice records its own
    // best so the merge is deterministic whatever the thread count.
    std::vector<Candidate> slice_best(g);
    maybe_parallel_for(config.parallel, g, [&](std::size_t ti) {
        const double theta = dtheta * static_cast<double>(ti);
        Candidate best{std::numeric_limits<double>::infinity(), 0};
        for (std::size_t pj = 0; pj < g; ++pj) {
            const double phi = dangle * static_cast<double>(pj);
            for (std::size_t pk = 0; pk < g; ++pk) {
                const double psi = dangle * static_cast<double>(pk);
                const double v = eval.eval_angles(theta, phi, psi);
                const std::size_t idx = (ti * g + pj) * g + pk;
                if (v < best.value) best = {v, idx};
            }
        }
        slice_best[ti] = best;
    });
    report.evaluations += g * g * g;

    Candidate best = slice_best[0];
    for (std::size_t ti = 1; ti < g; ++ti) {
        if (slice_best[ti].value < best.value) best = slice_best[ti];
    }
    auto params_of = [&](std::size_t idx) {
        const std::size_t pk = idx % g;
        const std::size_t pj = (idx / g) % g;
        const std::size_t ti = idx / (g * g);
        return std::array<double, 3>{dtheta * static_cast<double>(ti),
                                     dangle * static_cast<double>(pj),
                                     dangle * static_cast<double>(pk)};
    };
    const auto grid_params = params_of(best.index);
    if (best.value < at_identity) {
        report.history.push_back(
            {{grid_params[0], grid_params[1], grid_params[2]}, best.value});
    }

    // Downhill simplex refinement. History entries are gated on the best
    // value seen across every run so the log stays strictly decreasing.
    double best_seen = std::min(at_identity, best.value);
    struct RefineOutcome {
        std::array<double, 3> params{};
        double value = 0.0;
        bool converged = false;
    };
    auto refine = [&](const std::array<double, 3>& seed,
                      double seed_value) -> RefineOutcome {
        // The parametrization is defined for all real angles, so the walk
        // needs no clamping.
        std::array<std::array<double, 3>, 4> xs;
        std::array<double, 4> fs;
        xs[0] = seed;
        fs[0] = seed_value;
        const std::array<double, 3> h = {0.5 * dtheta, 0.5 * dangle, 0.5 * dangle};
        for (std::size_t k = 0; k < 3; ++k) {
            xs[k + 1] = xs[0];
            xs[k + 1][k] += h[k];
            fs[k + 1] = eval.eval_angles(xs[k + 1][0], xs[k + 1][1], xs[k + 1][2]);
            ++report.evaluations;
        }

        std::size_t simplex_evals = 3;
        bool converged = false;
        while (simplex_evals < config.simplex_max_evals) {
            // Order the four vertices ascending by value.
            std::array<std::size_t, 4> ord = {0, 1, 2, 3};
            std::sort(ord.begin(), ord.end(),
                      [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            std::array<std::array<double, 3>, 4> x2;
            std::array<double, 4> f2;
            for (std::size_t k = 0; k < 4; ++k) {
                x2[k] = xs[ord[k]];
                f2[k] = fs[ord[k]];
            }
            xs = x2;
            fs = f2;
            if (fs[3] - fs[0] < config.simplex_tol) {
                converged = true;
                break;
            }
            if (fs[0] < config.early_stop_below) {
                converged = true;
                break;
            }

            std::array<double, 3> centroid{};
            for (std::size_t k = 0; k < 3; ++k) {
                centroid[k] = (xs[0][k] + xs[1][k] + xs[2][k]) / 3.0;
            }
            auto point_at = [&centroid, &xs](double coef) {
                std::array<double, 3> p;
                for (std::size_t k = 0; k < 3; ++k) {
                    p[k] = centroid[k] + coef * (centroid[k] - xs[3][k]);
                }
                return p;
            };
            auto f_at = [&](const std::array<double, 3>& p) {
                ++simplex_evals;
                ++report.evaluations;
                return eval.eval_angles(p[0], p[1], p[2]);
            };

            const auto xr = point_at(1.0);
            const double fr = f_at(xr);
            if (fr < fs[0]) {
                const auto xe = point_at(2.0);
                const double fe = f_at(xe);
                if (fe < fr) {
                    xs[3] = xe;
                    fs[3] = fe;
                } else {
                    xs[3] = xr;
                    fs[3] = fr;
                }
            } else if (fr < fs[2]) {
                xs[3] = xr;
                fs[3] = fr;
            } else if (fr < fs[3]) {
                const auto xc = point_at(0.5);
                const double fc = f_at(xc);
                if (fc <= fr) {
                    xs[3] = xc;
                    fs[3] = fc;
                } else {
                    for (std::size_t k = 1; k < 4; ++k) {
                        for (std::size_t d = 0; d < 3; ++d) {
                            xs[k][d] = xs[0][d] + 0.5 * (xs[k][d] - xs[0][d]);
                        }
                        fs[k] = f_at(xs[k]);
                    }
                }
            } else {
                const auto xc = point_at(-0.5);
                const double fc = f_at(xc);
                if (fc < fs[3]) {
                    xs[3] = xc;
                    fs[3] = fc;
                } else {
                    for (std::size_t k = 1; k < 4; ++k) {
                        for (std::size_t d = 0; d < 3; ++d) {
                            xs[k][d] = xs[0][d] + 0.5 * (xs[k][d] - xs[0][d]);
                        }
                        fs[k] = f_at(xs[k]);
                    }
                }
            }
            const double current = *std::min_element(fs.begin(), fs.end());
            if (current < best_seen) {
                best_seen = current;
                const std::size_t arg = static_cast<std::size_t>(
                    std::min_element(fs.begin(), fs.end()) - fs.begin());
                report.history.push_back({{xs[arg][0], xs[arg][1], xs[arg][2]}, current});
            }
        }

        const std::size_t arg =
            static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
        return {xs[arg], fs[arg], converged};
    };

    // The landscape carries competing basins and the coarse grid's single
    // best cell is not always in the basin of the true minimum, so the
    // strongest slice candidates are each refined and the runs compete.
    std::vector<Candidate> order(slice_best);
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
        return a.value != b.value ? a.value < b.value : a.index < b.index;
    });
    constexpr std::size_t kRefineStarts = 8;
    const std::size_t runs = std::min<std::size_t>(kRefineStarts, order.size());

    std::array<double, 3> winner = grid_params;
    double winner_value = best.value;  // defensive; a simplex never loses its seed
    bool converged = false;
    for (std::size_t run = 0; run < runs; ++run) {
        const RefineOutcome out = refine(params_of(order[run].index), order[run].value);
        if (out.value < winner_value) {
            winner = out.params;
            winner_value = out.value;
            converged = out.converged;
        } else if (run == 0) {
            converged = out.converged;  // seed run defines convergence on a tie
        }
        if (winner_value < config.early_stop_below) break;
    }

    report.d_value = winner_value;
    report.converged = converged;
    ComplexMatrix u = basis_unitary_2(winner[0], winner[1], winner[2]);
    fix_column_phases(u);
    report.optimal_basisU = std::move(u);
    return report;
}

/// V e^{i eps Lambda} V^dagger from the eigensystem of Hermitian h.
ComplexMatrix unitary_exp_ih(const ComplexMatrix& h, double eps) {
    const EigenSystem es = eig_hermitian_full(h);
    const std::size_t d = h.rows();
    std::vector<cdouble> phases(d);
    for (std::size_t m = 0; m < d; ++m) {
        phases[m] = std::exp(cdouble(0.0, eps * es.values[m]));
    }
    ComplexMatrix out(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            cdouble acc = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
                acc += es.vectors(a, m) * phases[m] * std::conj(es.vectors(b, m));
            }
            out(a, b) = acc;
        }
    }
    return out;
}

struct RestartResult {
    double value = 0.0;
    ComplexMatrix basisU;
    std::size_t evaluations = 0;
    bool stalled = false;  // step size shrank out or early stop hit
};

MinimizationReport minimize_stochastic(const BipartiteState& state,
                                       const MinimizerConfig& config) {
    const BlockRecombiner eval(state);
    const std::size_t dB = state.dB;
    const std::size_t restarts = std::max<std::size_t>(1, config.restarts);
    std::vector<RestartResult> slots(restarts);

    maybe_parallel_for(config.parallel, restarts, [&](std::size_t r) {
        Rng rng = Rng::substream(config.seed, r);
        RestartResult res;
        ComplexMatrix u =
            (r == 0) ? ComplexMatrix::identity(dB) : random_unitary(rng, dB);
        double f = eval(u);
        res.evaluations = 1;
        double eps = 0.3;
        int fails = 0;
        std::size_t accepts = 0;
        for (std::size_t iter = 0; iter < config.descent_iters; ++iter) {
            if (f < config.early_stop_below) {
                res.stalled = true;
                break;
            }
            ComplexMatrix h(dB, dB);
            for (auto& e : h.data()) e = rng.complex_gaussian();
            ComplexMatrix herm(dB, dB);
            for (std::size_t a = 0; a < dB; ++a) {
                for (std::size_t b = 0; b < dB; ++b) {
                    herm(a, b) = 0.5 * (h(a, b) + std::conj(h(b, a)));
                }
            }
            ComplexMatrix trial = u * unitary_exp_ih(herm, eps);
            if (accepts > 0 && accepts % 64 == 0) orthonormalize_columns(trial);
            const double ft = eval(trial);
            ++res.evaluations;
            if (ft < f) {
                u = std::move(trial);
                f = ft;
                ++accepts;
                fails = 0;
            } else if (++fails >= 8) {
                fails = 0;
                eps *= 0.5;
                if (eps < 1e-6) {
                    res.stalled = true;
                    break;
                }
            }
        }
        res.value = f;
        res.basisU = std::move(u);
        slots[r] = std::move(res);
    });

    MinimizationReport report;
    std::size_t winner = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
        report.evaluations += slots[r].evaluations;
        if (slots[r].value < slots[winner].value) winner = r;
        if (r == 0 || slots[r].value < report.history.back().value) {
            report.history.push_back({{static_cast<double>(r)}, slots[r].value});
        }
    }
    report.d_value = slots[winner].value;
    report.converged = slots[winner].stalled;
    ComplexMatrix u = slots[winner].basisU;
    fix_column_phases(u);
    report.optimal_basisU = std::move(u);
    return report;
}

}  // namespace

MinimizationReport minimize_d(const BipartiteState& state, const MinimizerConfig& config) {
    validate_state(state);
    if (config.grid_points < 2) {
        throw ConfigError("minimize_d: grid needs at least 2 points per axis");
    }
    if (state.dB == 2) return minimize_two_level_b(state, config);
    return minimize_stochastic(state, config);
}

}  // namespace qcorr
