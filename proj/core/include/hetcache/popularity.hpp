#pragma once

#include <cstdint>
#include <vector>

namespace hetcache {

// Per-class Zipf request model. Class k ranks the library through its own
// permutation eta(.,k); user u belongs to class k with probability p_u^k.
// Membership stays probabilistic throughout, it is never sampled into a
// hard class.
class PopularityModel {
 public:
  // rank_by_class[k-1][f-1] = eta(f, k), a bijection onto 1..F per class.
  // class_probs[u-1][k-1] = p_u^k, each row summing to 1.
  PopularityModel(int file_count, double zipf_beta,
                  std::vector<std::vector<int>> rank_by_class,
                  std::vector<std::vector<double>> class_probs);

  int file_count() const { return file_count_; }
  int class_count() const { return class_count_; }
  int user_count() const { return static_cast<int>(class_probs_.size()); }
  double zipf_beta() const { return zipf_beta_; }

  int rank(int file, int klass) const;
  double class_prob(int user, int klass) const;

  // q_f^k = eta(f,k)^(-beta) / sum_f' eta(f',k)^(-beta)
  double zipf_prob(int file, int klass) const;

  // Q_{u,f} = sum_k p_u^k q_f^k
  double averaged_popularity(int user, int file) const;

  // Q_f = sum_u Q_{u,f}; sums to U over the library
  double file_metric(int file) const;

  // files ordered by descending Q_f (ties by file index)
  std::vector<int> files_by_metric() const;

 private:
  void check_user(int user) const;
  void check_file(int file) const;
  void check_class(int klass) const;

  int file_count_;
  int class_count_;
  double zipf_beta_;
  std::vector<std::vector<int>> rank_by_class_;
  std::vector<std::vector<double>> class_probs_;
  std::vector<std::vector<double>> zipf_;  // [k-1][f-1]
};

// The three-class membership preset, selected by u mod 3:
// 0 -> [0.3 0.5 0.2], 1 -> [0.2 0.3 0.5], 2 -> [0.5 0.2 0.3].
std::vector<double> default_class_probs(int user, int class_count = 3);

// Identity ranking for every class (eta(f,k) = f).
std::vector<std::vector<int>> identity_ranks(int file_count, int class_count);

// K independent uniformly random rank permutations drawn from seed.
std::vector<std::vector<int>> random_ranks(int file_count, int class_count,
                                           std::uint64_t seed);

// Model with random per-class rankings and the default membership preset.
PopularityModel make_default_popularity(int file_count, int user_count,
                                        double zipf_beta, std::uint64_t seed,
                                        int class_count = 3);

}  // namespace hetcache
