#include "hetcache/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hetcache/rng.hpp"

namespace hetcache {

PopularityModel::PopularityModel(int file_count, double zipf_beta,
                                 std::vector<std::vector<int>> rank_by_class,
                                 std::vector<std::vector<double>> class_probs)
    : file_count_(file_count),
      class_count_(static_cast<int>(rank_by_class.size())),
      zipf_beta_(zipf_beta),
      rank_by_class_(std::move(rank_by_class)),
      class_probs_(std::move(class_probs)) {
  if (file_count_ < 1) throw std::invalid_argument("PopularityModel: F >= 1");
  if (class_count_ < 1) throw std::invalid_argument("PopularityModel: K >= 1");
  if (zipf_beta_ < 0.0) throw std::invalid_argument("PopularityModel: beta >= 0");

  for (const auto& ranks : rank_by_class_) {
    if (static_cast<int>(ranks.size()) != file_count_)
      throw std::invalid_argument("PopularityModel: rank row length != F");
    std::vector<bool> seen(file_count_ + 1, false);
    for (int r : ranks) {
      if (r < 1 || r > file_count_ || seen[r])
        throw std::invalid_argument(
            "PopularityModel: ranks must be a permutation of 1..F");
      seen[r] = true;
    }
  }
  if (class_probs_.empty())
    throw std::invalid_argument("PopularityModel: at least one user");
  for (const auto& row : class_probs_) {
    if (static_cast<int>(row.size()) != class_count_)
      throw std::invalid_argument("PopularityModel: class prob row length != K");
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("PopularityModel: p_u^k outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("PopularityModel: class prob row must sum to 1");
  }

  // Precompute q_f^k once; everything downstream reads this table.
  zipf_.assign(class_count_, std::vector<double>(file_count_, 0.0));
  for (int k = 0; k < class_count_; ++k) {
    double norm = 0.0;
    for (int f = 0; f < file_count_; ++f)
      norm += std::pow(static_cast<double>(rank_by_class_[k][f]), -zipf_beta_);
    for (int f = 0; f < file_count_; ++f)
      zipf_[k][f] =
          std::pow(static_cast<double>(rank_by_class_[k][f]), -zipf_beta_) / norm;
  }
}

void PopularityModel::check_user(int user) const {
  if (user < 1 || user > user_count())
    throw std::out_of_range("user index " + std::to_string(user));
}
void PopularityModel::check_file(int file) const {
  if (file < 1 || file > file_count_)
    throw std::out_of_range("file index " + std::to_string(file));
}
void PopularityModel::check_class(int klass) const {
  if (klass < 1 || klass > class_count_)
    throw std::out_of_range("class index " + std::to_string(klass));
}

int PopularityModel::rank(int file, int klass) const {
  check_file(file);
  check_class(klass);
  return rank_by_class_[klass - 1][file - 1];
}

double PopularityModel::class_prob(int user, int klass) const {
  check_user(user);
  check_class(klass);
  return class_probs_[user - 1][klass - 1];
}

double PopularityModel::zipf_prob(int file, int klass) const {
  check_file(file);
  check_class(klass);
  return zipf_[klass - 1][file - 1];
}

double PopularityModel::averaged_popularity(int user, int file) const {
  check_user(user);
  check_file(file);
  double q = 0.0;
  for (int k = 1; k <= class_count_; ++k)
    q += class_probs_[user - 1][k - 1] * zipf_[k - 1][file - 1];
  return q;
}

double PopularityModel::file_metric(int file) const {
  double total = 0.0;
  for (int u = 1; u <= user_count(); ++u) total += averaged_popularity(u, file);
  return total;
}

std::vector<int> PopularityModel::files_by_metric() const {
  std::vector<int> files(file_count_);
  std::iota(files.begin(), files.end(), 1);
  std::vector<double> metric(file_count_);
  for (int f = 1; f <= file_count_; ++f) metric[f - 1] = file_metric(f);
  std::stable_sort(files.begin(), files.end(), [&](int a, int b) {
    if (metric[a - 1] != metric[b - 1]) return metric[a - 1] > metric[b - 1];
    return a < b;
  });
  return files;
}

std::vector<double> default_class_probs(int user, int class_count) {
  if (class_count != 3)
    throw std::invalid_argument(
        "default_class_probs: preset is defined for K = 3; supply an explicit "
        "membership matrix for other K");
  if (user < 1) throw std::invalid_argument("default_class_probs: user >= 1");
  switch (user % 3) {
    case 0: return {0.3, 0.5, 0.2};
    case 1: return {0.2, 0.3, 0.5};
    default: return {0.5, 0.2, 0.3};
  }
}

std::vector<std::vector<int>> identity_ranks(int file_count, int class_count) {
  std::vector<int> row(file_count);
  std::iota(row.begin(), row.end(), 1);
  return std::vector<std::vector<int>>(class_count, row);
}

std::vector<std::vector<int>> random_ranks(int file_count, int class_count,
                                           std::uint64_t seed) {
  std::vector<std::vector<int>> out;
  out.reserve(class_count);
  for (int k = 0; k < class_count; ++k) {
    Rng rng(derive_seed(seed, 0xabc000 + static_cast<std::uint64_t>(k)));
    std::vector<int> perm(file_count);
    std::iota(perm.begin(), perm.end(), 1);
    // Fisher-Yates with the deterministic engine
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.index(i)]);
    out.push_back(std::move(perm));
  }
  return out;
}

PopularityModel make_default_popularity(int file_count, int user_count,
                                        double zipf_beta, std::uint64_t seed,
                                        int class_count) {
  std::vector<std::vector<double>> probs;
  probs.reserve(user_count);
  for (int u = 1; u <= user_count; ++u)
    probs.push_back(default_class_probs(u, class_count));
  return PopularityModel(file_count, zipf_beta,
                         random_ranks(file_count, class_count, seed),
                         std::move(probs));
}

}  // namespace hetcache
