#ifndef SIGID_MATCHERS_HPP_
#define SIGID_MATCHERS_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigid/features.hpp"

namespace sigid {

struct MatcherConfig {
  std::vector<double> weights;   // per-feature, empty = all ones
  int k = 3;                     // sigma multiplier, one of {1, 2, 3}
  double epsilon_std = 1e-6;     // floor for per-feature std
  double shrinkage_lambda = 0.9; // covariance shrinkage toward scaled identity
  std::uint64_t split_seed = 0;  // seeds the feature-selection split
};

void validate(const MatcherConfig& cfg);

/// Per-subject enrollment statistics. The regularized covariance is kept as
/// its lower Cholesky factor; mean/std are population moments over all
/// enrolled samples with std floored at epsilon_std.
struct SubjectStats {
  int subject_id = 0;
  int dim = 0;
  int n_enrolled = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  Eigen::MatrixXd chol;                    // lower factor L, C_reg = L L^T
  std::vector<std::uint8_t> selected_mask; // features that pass the k-sigma rule
  double shrinkage_lambda = 0.9;
  double epsilon_std = 1e-6;
};

/// Fit moments + shrinkage covariance + the k-sigma feature-selection mask.
/// The mask comes from a seeded split of the enrolled samples into a stats
/// subset of size ceil(2N/3) and a validation rest; a feature is selected iff
/// every validation sample stays within k sigma of the stats-subset mean.
/// Throws EnrollmentError for fewer than 2 samples.
SubjectStats fit_subject(int subject_id, std::span<const FeatureVec> samples,
                         const MatcherConfig& cfg);

/// Build stats from externally supplied moments (the covariance is
/// Cholesky-factored here; throws NumericError when it is not PD).
SubjectStats subject_stats_from_moments(int subject_id,
                                        std::vector<double> mean,
                                        std::vector<double> stddev,
                                        const Eigen::MatrixXd& covariance,
                                        std::vector<std::uint8_t> selected_mask);

/// (1/n) * sqrt(sum_i w_i (q_i - mean_i)^2 / std_i^2), n = dimension.
double euclidean_score(const FeatureVec& q, const SubjectStats& s,
                       const MatcherConfig& cfg);

/// sqrt((q - mean)^T C^-1 (q - mean)) via Cholesky solve.
double mahalanobis_score(const FeatureVec& q, const SubjectStats& s);

/// Count of selected features with |mean_i - q_i| <= k * std_i. Higher is
/// more similar.
double gaussian_empirical_score(const FeatureVec& q, const SubjectStats& s,
                                const MatcherConfig& cfg);

// ---- score normalization for fusion input ----------------------------------

/// Per-matcher training-score ranges used to map raw scores onto [0,1].
struct NormStats {
  double ed_min = 0, ed_max = 0;
  double md_min = 0, md_max = 0;
  double ge_min = 0, ge_max = 0;
};

struct RawScores {
  double ed = 0, md = 0, ge = 0;
};

NormStats norm_stats_from_training(std::span<const RawScores> training);

/// Distances are flipped (training min -> 1), the count score is not
/// (training max -> 1); a constant training column maps everything to 0.5.
struct ScoreVector {
  double ed = 0, md = 0, ge = 0;       // raw
  std::array<double, 3> normalized{};  // in [0,1], larger = more similar
};

ScoreVector make_score_vector(double ed, double md, double ge,
                              const NormStats& norm);

// ---- serialization ----------------------------------------------------------

/// JSON with mean/std/mask and the covariance as its row-major lower
/// Cholesky factor.
std::string subject_stats_to_json(const SubjectStats& s);
SubjectStats subject_stats_from_json(std::string_view text);

}  // namespace sigid

#endif  // SIGID_MATCHERS_HPP_
