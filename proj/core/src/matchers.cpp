#include "sigid/matchers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "sigid/errors.hpp"
#include "sigid/rng.hpp"

namespace sigid {

void validate(const MatcherConfig& cfg) {
  if (cfg.k < 1 || cfg.k > 3) throw ConfigError("matcher: k must be 1, 2 or 3");
  if (!(cfg.epsilon_std > 0.0)) throw ConfigError("matcher: epsilon_std must be > 0");
  if (cfg.shrinkage_lambda < 0.0 || cfg.shrinkage_lambda > 1.0)
    throw ConfigError("matcher: shrinkage lambda must lie in [0,1]");
  for (double w : cfg.weights)
    if (w < 0.0) throw ConfigError("matcher: weights must be >= 0");
}

namespace {

void check_dim(std::size_t got, std::size_t want, const char* who) {
  if (got != want) throw ShapeError(std::string(who) + ": dimension mismatch");
}

// Population moments over the given sample indices.
void moments(std::span<const FeatureVec> samples, std::span<const int> idx,
             std::vector<double>& mean, std::vector<double>& stddev) {
  const std::size_t dim = samples[idx[0]].size();
  mean.assign(dim, 0.0);
  stddev.assign(dim, 0.0);
  for (int i : idx)
    for (std::size_t d = 0; d < dim; ++d) mean[d] += samples[i][d];
  for (double& m : mean) m /= static_cast<double>(idx.size());
  for (int i : idx)
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = samples[i][d] - mean[d];
      stddev[d] += diff * diff;
    }
  for (double& s : stddev) s = std::sqrt(s / static_cast<double>(idx.size()));
}

}  // namespace

SubjectStats fit_subject(int subject_id, std::span<const FeatureVec> samples,
                         const MatcherConfig& cfg) {
  validate(cfg);
  if (samples.size() < 2)
    throw EnrollmentError("fit_subject: need at least 2 samples, got " +
                          std::to_string(samples.size()));
  const std::size_t dim = samples[0].size();
  for (const auto& s : samples) check_dim(s.size(), dim, "fit_subject");

  const int n = static_cast<int>(samples.size());
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  SubjectStats st;
  st.subject_id = subject_id;
  st.dim = static_cast<int>(dim);
  st.n_enrolled = n;
  st.shrinkage_lambda = cfg.shrinkage_lambda;
  st.epsilon_std = cfg.epsilon_std;

  moments(samples, all, st.mean, st.stddev);
  for (double& s : st.stddev) s = std::max(s, cfg.epsilon_std);

  // Population covariance with shrinkage toward the scaled identity. The
  // target trace is floored so a degenerate (all-identical) enrollment still
  // produces a positive-definite matrix.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd diff(dim);
    for (std::size_t d = 0; d < dim; ++d) diff[d] = samples[i][d] - st.mean[d];
    cov.noalias() += diff * diff.transpose();
  }
  cov /= static_cast<double>(n);
  double target = cov.trace() / static_cast<double>(dim);
  if (target <= 0.0) target = cfg.epsilon_std * cfg.epsilon_std;
  const double lambda = cfg.shrinkage_lambda;
  Eigen::MatrixXd reg = (1.0 - lambda) * cov;
  reg.diagonal().array() += lambda * target;

  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success)
    throw NumericError("fit_subject: regularized covariance is not PD");
  st.chol = llt.matrixL();

  // Feature-selection mask: stats from a seeded ceil(2N/3) subset, selection
  // = every remaining sample within k sigma of that subset's mean.
  std::vector<int> order = all;
  Rng rng(mix_seed(cfg.split_seed, static_cast<std::uint64_t>(subject_id)));
  rng.shuffle(order);
  const int n1 = (2 * n + 2) / 3;  // ceil(2N/3)
  std::vector<int> stats_idx(order.begin(), order.begin() + n1);
  std::vector<int> val_idx(order.begin() + n1, order.end());

  std::vector<double> mu1, sigma1;
  moments(samples, stats_idx, mu1, sigma1);
  for (double& s : sigma1) s = std::max(s, cfg.epsilon_std);

  st.selected_mask.assign(dim, 1);
  for (std::size_t d = 0; d < dim; ++d) {
    for (int i : val_idx) {
      if (std::abs(mu1[d] - samples[i][d]) > cfg.k * sigma1[d]) {
        st.selected_mask[d] = 0;
        break;
      }
    }
  }
  return st;
}

SubjectStats subject_stats_from_moments(int subject_id, std::vector<double> mean,
                                        std::vector<double> stddev,
                                        const Eigen::MatrixXd& covariance,
                                        std::vector<std::uint8_t> selected_mask) {
  const std::size_t dim = mean.size();
  check_dim(stddev.size(), dim, "subject_stats_from_moments");
  check_dim(selected_mask.size(), dim, "subject_stats_from_moments");
  if (covariance.rows() != static_cast<Eigen::Index>(dim) ||
      covariance.cols() != static_cast<Eigen::Index>(dim))
    throw ShapeError("subject_stats_from_moments: covariance shape mismatch");

  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw NumericError("subject_stats_from_moments: covariance is not PD");

  SubjectStats st;
  st.subject_id = subject_id;
  st.dim = static_cast<int>(dim);
  st.n_enrolled = 0;
  st.mean = std::move(mean);
  st.stddev = std::move(stddev);
  st.chol = llt.matrixL();
  st.selected_mask = std::move(selected_mask);
  return st;
}

double euclidean_score(const FeatureVec& q, const SubjectStats& s,
                       const MatcherConfig& cfg) {
  check_dim(q.size(), s.mean.size(), "euclidean_score");
  if (!cfg.weights.empty())
    check_dim(cfg.weights.size(), s.mean.size(), "euclidean_score weights");
  const std::size_t n = q.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = cfg.weights.empty() ? 1.0 : cfg.weights[i];
    const double diff = q[i] - s.mean[i];
    acc += w * diff * diff / (s.stddev[i] * s.stddev[i]);
  }
  // The 1/n factor scales the root itself.
  return std::sqrt(acc) / static_cast<double>(n);
}

double mahalanobis_score(const FeatureVec& q, const SubjectStats& s) {
  check_dim(q.size(), s.mean.size(), "mahalanobis_score");
  Eigen::VectorXd diff(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) diff[i] = q[i] - s.mean[i];
  // With C = L L^T, solve L z = diff; then diff^T C^-1 diff = ||z||^2.
  const Eigen::VectorXd z =
      s.chol.triangularView<Eigen::Lower>().solve(diff);
  return z.norm();
}

double gaussian_empirical_score(const FeatureVec& q, const SubjectStats& s,
                                const MatcherConfig& cfg) {
  validate(cfg);
  check_dim(q.size(), s.mean.size(), "gaussian_empirical_score");
  int count = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!s.selected_mask[i]) continue;
    if (std::abs(s.mean[i] - q[i]) <= cfg.k * s.stddev[i]) ++count;
  }
  return static_cast<double>(count);
}

NormStats norm_stats_from_training(std::span<const RawScores> training) {
  if (training.empty())
    throw ProtocolError("norm_stats_from_training: no training scores");
  NormStats n;
  n.ed_min = n.ed_max = training[0].ed;
  n.md_min = n.md_max = training[0].md;
  n.ge_min = n.ge_max = training[0].ge;
  for (const auto& t : training) {
    n.ed_min = std::min(n.ed_min, t.ed);
    n.ed_max = std::max(n.ed_max, t.ed);
    n.md_min = std::min(n.md_min, t.md);
    n.md_max = std::max(n.md_max, t.md);
    n.ge_min = std::min(n.ge_min, t.ge);
    n.ge_max = std::max(n.ge_max, t.ge);
  }
  return n;
}

namespace {

double minmax01(double v, double lo, double hi) {
  if (hi <= lo) return 0.5;  // degenerate constant training column
  return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

ScoreVector make_score_vector(double ed, double md, double ge,
                              const NormStats& norm) {
  ScoreVector sv;
  sv.ed = ed;
  sv.md = md;
  sv.ge = ge;
  const double ed01 = minmax01(ed, norm.ed_min, norm.ed_max);
  const double md01 = minmax01(md, norm.md_min, norm.md_max);
  // Distances: smaller is more similar, so flip. The count score keeps its
  // orientation. Degenerate columns sit exactly at 0.5 either way.
  sv.normalized[0] = (norm.ed_max <= norm.ed_min) ? 0.5 : 1.0 - ed01;
  sv.normalized[1] = (norm.md_max <= norm.md_min) ? 0.5 : 1.0 - md01;
  sv.normalized[2] = minmax01(ge, norm.ge_min, norm.ge_max);
  return sv;
}

// ---- serialization -----------------------------------------------------------

std::string subject_stats_to_json(const SubjectStats& s) {
  nlohmann::ordered_json j;
  j["version"] = "sigid-stats/1";
  j["subject_id"] = s.subject_id;
  j["dim"] = s.dim;
  j["n_enrolled"] = s.n_enrolled;
  j["shrinkage_lambda"] = s.shrinkage_lambda;
  j["epsilon_std"] = s.epsilon_std;
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  j["selected_mask"] = s.selected_mask;
  std::vector<double> chol;
  chol.reserve(static_cast<std::size_t>(s.dim) * s.dim);
  for (int r = 0; r < s.dim; ++r)
    for (int c = 0; c < s.dim; ++c) chol.push_back(s.chol(r, c));
  j["cov_cholesky_row_major"] = std::move(chol);
  return j.dump();
}

SubjectStats subject_stats_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("subject stats: bad JSON: ") + e.what());
  }
  SubjectStats s;
  try {
    s.subject_id = j.at("subject_id").get<int>();
    s.dim = j.at("dim").get<int>();
    s.n_enrolled = j.at("n_enrolled").get<int>();
    s.shrinkage_lambda = j.at("shrinkage_lambda").get<double>();
    s.epsilon_std = j.at("epsilon_std").get<double>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("std").get<std::vector<double>>();
    s.selected_mask = j.at("selected_mask").get<std::vector<std::uint8_t>>();
    const auto chol = j.at("cov_cholesky_row_major").get<std::vector<double>>();
    if (static_cast<int>(s.mean.size()) != s.dim ||
        static_cast<int>(s.stddev.size()) != s.dim ||
        static_cast<int>(s.selected_mask.size()) != s.dim ||
        static_cast<int>(chol.size()) != s.dim * s.dim)
      throw IoError("subject stats: field sizes disagree with dim");
    s.chol.resize(s.dim, s.dim);
    for (int r = 0; r < s.dim; ++r)
      for (int c = 0; c < s.dim; ++c)
        s.chol(r, c) = chol[static_cast<std::size_t>(r) * s.dim + c];
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("subject stats: missing field: ") + e.what());
  }
  return s;
}

}  // namespace sigid
