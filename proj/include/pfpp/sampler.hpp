#pragma once

#include <span>

#include "pfpp/kernels.hpp"

namespace pfpp {

// Exact law of the finite point process: one probability atom per occupancy
// mask (bit i = cell i occupied). `inclusion[S]` holds P(X contains S), the
// qdet of the table restricted to S; `prob[S]` holds P(X = S) obtained by
// inclusion-exclusion over supersets.
struct AtomTable {
    int cells = 0;
    std::vector<double> prob;
    std::vector<double> inclusion;
    double total = 0.0;     // sum of atoms; 1 up to rounding for a valid kernel
    double min_atom = 0.0;  // most negative atom before validation

    double atom(uint32_t mask) const { return prob[mask]; }
    // P(X contains the given cells).
    double correlation(std::span<const int> cells_subset) const;
};

// qdet of every principal submatrix, indexed by mask. Production path is
// OpenMP-parallel over subsets; the serial variant is the testing reference.
std::vector<double> principal_qdets(const GridKernel& t);
std::vector<double> principal_qdets_serial(const GridKernel& t);

// Brute-force law of the process. Validates that atoms are >= -1e-9 and sum
// to 1 within 1e-8; otherwise the kernel is not a valid process and a
// DegeneracyError identifies the worst offender.
AtomTable atom_oracle(const GridKernel& t);

// Law on the complement of `window` given the exact occupancy inside it:
// restriction and renormalization of the atoms. Throws when the conditioning
// event has zero probability.
AtomTable conditional_atoms(const AtomTable& atoms, std::span<const int> window,
                            std::span<const int> occupied);

// Probabilities within [-1e-9, 0) and (1, 1 + 1e-9] are clamped to the
// boundary; anything further out is a degeneracy.
double clamp_probability(double p);

// P(cell occupied | occupancies of cells 0..cell-1), where bit i of
// `occupied_mask` gives the decided occupancy of cell i. The fast path keeps
// the reduced kernel's complex lift updated in place; the reference recomputes
// the conditional kernel from scratch.
double occupancy_probability(const GridKernel& t, int cell, uint32_t occupied_mask);
double occupancy_probability_reference(const GridKernel& t, int cell, uint32_t occupied_mask);

struct SampleBatch {
    uint64_t seed = 0;
    int cells = 0;
    std::vector<uint32_t> occupancy;  // one mask per sample

    // Total-variation distance between the empirical law and exact atoms.
    double tv_distance(const AtomTable& atoms) const;
};

// Left-to-right sequential sampler: cell i is drawn Bernoulli with the scalar
// diagonal of the kernel conditioned on all earlier decisions. Counter-based
// per-sample streams make the batch independent of thread count. The serial
// variant drives the conditional-kernel transform directly and is kept as the
// testing reference.
SampleBatch sequential_sample(const GridKernel& t, uint64_t seed, int count);
SampleBatch sequential_sample_serial(const GridKernel& t, uint64_t seed, int count);

}  // namespace pfpp
