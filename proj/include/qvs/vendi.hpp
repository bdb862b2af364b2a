#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvs/eigen.hpp"
#include "qvs/kernels.hpp"

namespace qvs {

// Sensitivity order of the score family: a finite q >= 0 or the symbolic
// infinity. Values within 1e-9 of 1 are routed to the Shannon branch to avoid
// the 1/(1-q) singularity.
class Order {
 public:
  static Order finite(double q);
  static Order infinity();
  static Order shannon() { return finite(1.0); }

  // Accepts a decimal number or the literal "inf".
  static Order parse(std::string_view token);

  bool is_infinite() const { return infinite_; }
  bool is_shannon() const;
  bool is_zero() const { return !infinite_ && q_ == 0.0; }
  double value() const;  // throws for the infinite order

  // "0", "0.1", "1", "inf" -- used in CSV columns and file names.
  std::string str() const;

  bool operator==(const Order& other) const {
    return infinite_ == other.infinite_ && (infinite_ || q_ == other.q_);
  }

 private:
  Order(double q, bool inf) : q_(q), infinite_(inf) {}
  double q_ = 1.0;
  bool infinite_ = false;
};

// Items with per-item quality scores in [0, 1].
struct ScoredSet {
  std::vector<Point> items;
  std::vector<double> scores;

  std::size_t size() const { return items.size(); }
  void validate() const;
};

// Score from an already-normalized eigenvalue vector. This is the common core
// of every entry point below: q=1 is exp of the Shannon entropy (0 log 0 := 0),
// q=0 counts the entries above 1e-10, q=inf is 1/max, and general q evaluates
// exp(log(sum lambda^q) / (1-q)). Empty input yields 0.
double vendi_score_from_normalized(std::span<const double> normalized, Order order);

// Effective number of unique items in the set behind `m`. Lies in [1, n] for
// nonempty input; an empty matrix yields 0 by convention.
double vendi_score(const KernelMatrix& m, Order order);

// Score of the principal submatrix selected by `indices` (distinct, in range).
double vendi_score_of_subset(const KernelMatrix& pool, std::span<const std::size_t> indices,
                             Order order);

// Mean quality times the diversity score: the effective number of
// high-quality items. Empty set yields 0 (no error).
double quality_weighted_vendi_score(const ScoredSet& set, const KernelSpec& spec, Order order);

// Affine map of raw values onto [0, 1] quality scores; a constant vector maps
// to all 0.5.
std::vector<double> min_max_normalize(std::span<const double> values);

}  // namespace qvs
