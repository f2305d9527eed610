#include "pfpp/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "pfpp/errors.hpp"
#include "pfpp/rng.hpp"
#include "pfpp/transforms.hpp"

namespace pfpp {

namespace {

void check_oracle_size(int n) {
    if (n > 14) throw SchemaError("atom oracle is capped at 14 cells");
}

double checked_real_qdet(const Complex& v) {
    if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real())))
        throw DegeneracyError("principal qdet has a non-real value (imag " +
                              std::to_string(v.imag()) + ")");
    return v.real();
}

// Reduced kernel state in the complex lift, advanced cell by cell.
class SweepState {
public:
    explicit SweepState(const GridKernel& t)
        : a_(complex_lift(t.table())), scale_(std::max(1.0, t.table().max_abs())) {}

    double step_probability(int cell) const {
        Eigen::Matrix2cd block = a_.block<2, 2>(2 * cell, 2 * cell);
        const int m = static_cast<int>(empty_.size());
        if (m > 0) {
            Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(2 * m, 2 * m);
            Eigen::MatrixXcd rhs(2 * m, 2);
            Eigen::MatrixXcd rows(2, 2 * m);
            for (int bi = 0; bi < m; ++bi) {
                for (int bj = 0; bj < m; ++bj)
                    s.block<2, 2>(2 * bi, 2 * bj) -=
                        a_.block<2, 2>(2 * empty_[bi], 2 * empty_[bj]);
                rhs.block<2, 2>(2 * bi, 0) = a_.block<2, 2>(2 * empty_[bi], 2 * cell);
                rows.block<2, 2>(0, 2 * bi) = a_.block<2, 2>(2 * cell, 2 * empty_[bi]);
            }
            block += rows * s.partialPivLu().solve(rhs);
        }
        const Quaternion q = from_mat2(block);
        if (vector_defect(q) > 1e-6 * scale_ || std::abs(q.q0.imag()) > 1e-6 * scale_)
            throw DegeneracyError("conditional intensity is not a real scalar");
        return q.q0.real();
    }

    void mark_empty(int cell) { empty_.push_back(cell); }

    void mark_occupied(int cell) {
        const Complex c = 0.5 * (a_(2 * cell, 2 * cell) + a_(2 * cell + 1, 2 * cell + 1));
        if (!(c.real() > 1e-12 * scale_))
            throw DegeneracyError("cannot reduce at a cell with vanishing intensity");
        const Eigen::MatrixXcd col = a_.middleCols(2 * cell, 2);
        const Eigen::MatrixXcd row = a_.middleRows(2 * cell, 2);
        a_.noalias() -= col * (row / c);
        a_.middleCols(2 * cell, 2).setZero();
        a_.middleRows(2 * cell, 2).setZero();
    }

private:
    Eigen::MatrixXcd a_;
    double scale_;
    std::vector<int> empty_;
};

void mobius_over_supersets(std::vector<double>& f, int n) {
    // In-place transform of g into sum over supersets with alternating sign:
    // per bit, f[S] -= f[S | bit] for S without the bit.
    for (int b = 0; b < n; ++b) {
        const uint32_t bit = 1u << b;
        for (uint32_t s = 0; s < f.size(); ++s)
            if (!(s & bit)) f[s] -= f[s | bit];
    }
}

void zeta_over_supersets(std::vector<double>& f, int n) {
    for (int b = 0; b < n; ++b) {
        const uint32_t bit = 1u << b;
        for (uint32_t s = 0; s < f.size(); ++s)
            if (!(s & bit)) f[s] += f[s | bit];
    }
}

}  // namespace

double AtomTable::correlation(std::span<const int> cells_subset) const {
    uint32_t mask = 0;
    for (int c : cells_subset) {
        if (c < 0 || c >= cells) throw SchemaError("correlation cell out of range");
        mask |= 1u << c;
    }
    return inclusion[mask];
}

std::vector<double> principal_qdets_serial(const GridKernel& t) {
    check_oracle_size(t.size());
    std::vector<double> q(1ull << t.size());
    for (uint32_t mask = 0; mask < q.size(); ++mask)
        q[mask] = checked_real_qdet(qdet(submatrix_mask(t.table(), mask)));
    return q;
}

std::vector<double> principal_qdets(const GridKernel& t) {
    check_oracle_size(t.size());
    std::vector<double> q(1ull << t.size());
    const long long count = static_cast<long long>(q.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long long mask = 0; mask < count; ++mask)
        q[mask] = checked_real_qdet(qdet(submatrix_mask(t.table(), static_cast<uint32_t>(mask))));
    return q;
}

AtomTable atom_oracle(const GridKernel& t) {
    AtomTable out;
    out.cells = t.size();
    out.inclusion = principal_qdets(t);
    out.prob = out.inclusion;
    mobius_over_supersets(out.prob, out.cells);

    out.min_atom = 0.0;
    uint32_t worst = 0;
    double sum = 0.0;
    for (uint32_t s = 0; s < out.prob.size(); ++s) {
        sum += out.prob[s];
        if (out.prob[s] < out.min_atom) {
            out.min_atom = out.prob[s];
            worst = s;
        }
    }
    out.total = sum;
    if (out.min_atom < -1e-9)
        throw DegeneracyError("kernel is not a valid process: atom " + std::to_string(worst) +
                              " has probability " + std::to_string(out.min_atom));
    if (std::abs(sum - 1.0) > 1e-8)
        throw DegeneracyError("kernel is not a valid process: atoms sum to " +
                              std::to_string(sum));
    return out;
}

AtomTable conditional_atoms(const AtomTable& atoms, std::span<const int> window,
                            std::span<const int> occupied) {
    uint32_t wmask = 0, omask = 0;
    for (int c : window) {
        if (c < 0 || c >= atoms.cells) throw SchemaError("window cell out of range");
        wmask |= 1u << c;
    }
    for (int c : occupied) {
        omask |= 1u << c;
        if (!(wmask & (1u << c))) throw SchemaError("occupied cell outside the window");
    }
    std::vector<int> comp;
    for (int i = 0; i < atoms.cells; ++i)
        if (!(wmask & (1u << i))) comp.push_back(i);

    AtomTable out;
    out.cells = static_cast<int>(comp.size());
    out.prob.assign(1ull << out.cells, 0.0);
    double denom = 0.0;
    for (uint32_t s = 0; s < out.prob.size(); ++s) {
        uint32_t full = omask;
        for (int b = 0; b < out.cells; ++b)
            if (s & (1u << b)) full |= 1u << comp[b];
        out.prob[s] = atoms.prob[full];
        denom += out.prob[s];
    }
    if (!(denom > 0.0))
        throw DegeneracyError("conditioning event has zero probability");
    for (double& p : out.prob) p /= denom;
    out.inclusion = out.prob;
    zeta_over_supersets(out.inclusion, out.cells);
    out.total = 1.0;
    out.min_atom = *std::min_element(out.prob.begin(), out.prob.end());
    return out;
}

double clamp_probability(double p) {
    if (p >= 0.0 && p <= 1.0) return p;
    if (p < 0.0 && p >= -1e-9) return 0.0;
    if (p > 1.0 && p <= 1.0 + 1e-9) return 1.0;
    throw DegeneracyError("occupancy probability " + std::to_string(p) +
                          " is outside [0,1] beyond the clamping band");
}

double occupancy_probability(const GridKernel& t, int cell, uint32_t occupied_mask) {
    if (cell < 0 || cell >= t.size()) throw SchemaError("cell index out of range");
    SweepState state(t);
    for (int i = 0; i < cell; ++i) {
        if (occupied_mask & (1u << i))
            state.mark_occupied(i);
        else
            state.mark_empty(i);
    }
    return clamp_probability(state.step_probability(cell));
}

double occupancy_probability_reference(const GridKernel& t, int cell,
                                       uint32_t occupied_mask) {
    if (cell < 0 || cell >= t.size()) throw SchemaError("cell index out of range");
    if (cell == 0) return clamp_probability(t.occupancy(0));
    std::vector<int> window, occ;
    for (int i = 0; i < cell; ++i) {
        window.push_back(i);
        if (occupied_mask & (1u << i)) occ.push_back(i);
    }
    const GridKernel cond = conditional_kernel(t, window, occ);
    // Complement cells are ascending, so `cell` sits first.
    return clamp_probability(cond.occupancy(0));
}

namespace {

template <typename StepFn>
SampleBatch run_batch(const GridKernel& t, uint64_t seed, int count, const StepFn& sample_one) {
    if (count < 0) throw SchemaError("sample count must be nonnegative");
    if (t.size() > 24) throw SchemaError("sequential sampler is capped at 24 cells");
    SampleBatch batch;
    batch.seed = seed;
    batch.cells = t.size();
    batch.occupancy.assign(static_cast<size_t>(count), 0u);
#pragma omp parallel for schedule(static)
    for (long long s = 0; s < static_cast<long long>(count); ++s) {
        CounterRng rng(seed, static_cast<uint64_t>(s));
        batch.occupancy[s] = sample_one(rng);
    }
    return batch;
}

}  // namespace

SampleBatch sequential_sample(const GridKernel& t, uint64_t seed, int count) {
    return run_batch(t, seed, count, [&](CounterRng& rng) {
        SweepState state(t);
        uint32_t mask = 0;
        for (int i = 0; i < t.size(); ++i) {
            const double p = clamp_probability(state.step_probability(i));
            if (rng.next_uniform() < p) {
                mask |= 1u << i;
                state.mark_occupied(i);
            } else {
                state.mark_empty(i);
            }
        }
        return mask;
    });
}

SampleBatch sequential_sample_serial(const GridKernel& t, uint64_t seed, int count) {
    if (count < 0) throw SchemaError("sample count must be nonnegative");
    if (t.size() > 24) throw SchemaError("sequential sampler is capped at 24 cells");
    SampleBatch batch;
    batch.seed = seed;
    batch.cells = t.size();
    batch.occupancy.assign(static_cast<size_t>(count), 0u);
    for (long long s = 0; s < static_cast<long long>(count); ++s) {
        CounterRng rng(seed, static_cast<uint64_t>(s));
        uint32_t mask = 0;
        for (int i = 0; i < t.size(); ++i) {
            const double p = occupancy_probability_reference(t, i, mask);
            if (rng.next_uniform() < p) mask |= 1u << i;
        }
        batch.occupancy[s] = mask;
    }
    return batch;
}

double SampleBatch::tv_distance(const AtomTable& atoms) const {
    if (atoms.cells != cells) throw SchemaError("atom table does not match the batch");
    std::vector<double> freq(atoms.prob.size(), 0.0);
    for (uint32_t mask : occupancy) freq[mask] += 1.0;
    const double n = static_cast<double>(occupancy.size());
    double tv = 0.0;
    for (uint32_t s = 0; s < freq.size(); ++s)
        tv += std::abs(freq[s] / n - atoms.prob[s]);
    return 0.5 * tv;
}

}  // namespace pfpp
