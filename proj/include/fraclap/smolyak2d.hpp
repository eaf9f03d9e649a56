#pragma once

#include <map>
#include <utility>
#include <vector>

namespace fraclap {

using Node2 = std::pair<int, int>;

// Canonical (i >= j >= 0) weights; the full rule follows from sign flips and i <-> j.
struct SparseWeights2D {
  int n_q = 0;
  double a = 1.0;
  std::map<Node2, double> entries;
  double condition = 0.0;   // implicit path: 2-norm condition number of the system
  double asymmetry = 0.0;   // Smolyak path: max |W(i,j) - W(j,i)| before symmetrising

  double at(int i, int j) const;
};

std::vector<Node2> node_set(int n_q);

// Conditions (m, n), m >= n, m + n <= n_q, in the order matching node_set rows.
std::vector<Node2> condition_set(int n_q);

// Number of sign/permutation images of a canonical node (1, 4 or 8).
int orbit_size(int i, int j);

SparseWeights2D implicit_weights(int n_q, double a);

enum class OddClosure { asymmetric, arrowhead };

SparseWeights2D smolyak_weights(int n_q, double a, OddClosure odd = OddClosure::asymmetric);

// Dense symmetric field over [-h, h]^2, h = n_q, row-major.
struct WeightField2D {
  int half = 0;
  std::vector<double> v;
  double& at(int i, int j) { return v[(i + half) * (2 * half + 1) + (j + half)]; }
  double at(int i, int j) const { return v[(i + half) * (2 * half + 1) + (j + half)]; }
};

WeightField2D expand_full(const SparseWeights2D& sparse);

}  // namespace fraclap
