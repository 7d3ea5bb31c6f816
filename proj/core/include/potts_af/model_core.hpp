#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace potts_af {

// Colors are 0-based throughout: a spin takes values in {0, ..., q-1}.
struct ModelParams {
  int q = 2;
  double beta = 0.0;
  double c = 0.0;

  // Throws DomainError unless q >= 2, beta >= 0, c >= 0 and all finite
  // (beta = +inf allowed only when requested).
  void validate(bool allow_infinite_beta = false) const;
};

using SpinConfig = std::vector<int>;
using ReplicaBundle = std::vector<SpinConfig>;

class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  explicit CouplingMatrix(int n);
  explicit CouplingMatrix(const std::vector<std::vector<int>>& rows);

  int size() const { return n_; }
  int at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, int v);
  void add(int i, int j, int v = 1) { set(i, j, at(i, j) + v); }
  std::int64_t total() const;
  bool operator==(const CouplingMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<int> entries_;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 20000;

// Number of configurations q^n, saturating at UINT64_MAX.
std::uint64_t config_count(int q, int n);

std::int64_t hamiltonian(const SpinConfig& sigma, const CouplingMatrix& J);

// counts[e] = number of configurations with energy e; energies are integers in [0, total(J)].
std::vector<double> energy_histogram(const CouplingMatrix& J, int q,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

double log_partition(const CouplingMatrix& J, int q, double beta,
                     std::uint64_t budget = kDefaultEnumerationBudget);
double pressure_density(const CouplingMatrix& J, int q, double beta,
                        std::uint64_t budget = kDefaultEnumerationBudget);
// beta = +inf gives N^-1 ln(number of ground states).
double entropy_density(const CouplingMatrix& J, int q, double beta,
                       std::uint64_t budget = kDefaultEnumerationBudget);

double empirical_measure(const ReplicaBundle& bundle, std::span<const int> s);

using ReplicaObservable = std::function<double(const ReplicaBundle&)>;

// Expectation under the R-fold product Gibbs measure by enumerating all q^(N R) bundles.
double gibbs_replica_expectation(const CouplingMatrix& J, int q, double beta, int R,
                                 const ReplicaObservable& f,
                                 std::uint64_t budget = kDefaultEnumerationBudget);

// <delta(sigma_i, sigma_j)> for all i, j (row-major N x N).
std::vector<double> two_point_function(const CouplingMatrix& J, int q, double beta,
                                       std::uint64_t budget = kDefaultEnumerationBudget);

// Visits every configuration in mixed-radix order (site 0 fastest).
void for_each_config(int n, int q, std::uint64_t budget, const std::function<void(const SpinConfig&)>& fn);
// Same order, with H(sigma, J) updated incrementally.
void for_each_config_energy(const CouplingMatrix& J, int q, std::uint64_t budget,
                            const std::function<void(const SpinConfig&, std::int64_t)>& fn);

}  // namespace potts_af
