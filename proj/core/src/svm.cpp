#include "sigid/svm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sigid/errors.hpp"

namespace sigid {

void validate(const TrainConfig& cfg) {
  if (!(cfg.c_reg > 0.0)) throw ConfigError("svm: box constraint must be > 0");
  if (!(cfg.kkt_tol > 0.0)) throw ConfigError("svm: kkt tolerance must be > 0");
  if (cfg.max_passes < 1) throw ConfigError("svm: max_passes must be >= 1");
  if (!(cfg.prune_tol > 0.0)) throw ConfigError("svm: prune tolerance must be > 0");
}

double kernel_eval(const Kernel& k, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("kernel_eval: dimension mismatch");
  if (k.kind == KernelKind::kLinear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  if (!(k.gamma > 0.0)) throw ConfigError("kernel_eval: rbf gamma must be > 0");
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-k.gamma * d2);
}

namespace {

constexpr double kAlphaZero = 1e-12;  // below this an example is not a SV

}  // namespace

TrainResult train(std::span<const LabeledScore> data, const Kernel& kernel,
                  const TrainConfig& cfg) {
  validate(cfg);
  const int n = static_cast<int>(data.size());
  if (n < 2) throw Error("train: need at least 2 examples");
  bool has_pos = false, has_neg = false;
  const std::size_t dim = data[0].m.size();
  for (const auto& d : data) {
    if (d.y == 1) has_pos = true;
    else if (d.y == -1) has_neg = true;
    else throw Error("train: labels must be +1 or -1");
    if (d.m.size() != dim) throw ShapeError("train: inconsistent input dimension");
  }
  if (!has_pos || !has_neg) throw Error("train: both classes must be present");

  const double c = cfg.c_reg;

  // Full Gram cache; the training sets here are a few hundred 3-vectors.
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      gram(i, j) = gram(j, i) = kernel_eval(kernel, data[i].m, data[j].m);

  std::vector<double> alpha(n, 0.0);
  // g[i] = sum_j alpha_j y_j K_ij; f[i] = g[i] - y_i drives pair selection.
  std::vector<double> g(n, 0.0);
  auto f_of = [&](int i) { return g[i] - data[i].y; };

  auto in_up = [&](int i) {
    return (data[i].y == 1 && alpha[i] < c) || (data[i].y == -1 && alpha[i] > 0.0);
  };
  auto in_low = [&](int i) {
    return (data[i].y == -1 && alpha[i] < c) || (data[i].y == 1 && alpha[i] > 0.0);
  };

  bool converged = false;
  int iters = 0;
  double f_up_final = 0.0, f_low_final = 0.0;
  for (; iters < cfg.max_passes; ++iters) {
    // Maximal violating pair.
    int i_up = -1, i_low = -1;
    double f_up = std::numeric_limits<double>::infinity();
    double f_low = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double fi = f_of(i);
      if (in_up(i) && fi < f_up) {
        f_up = fi;
        i_up = i;
      }
      if (in_low(i) && fi > f_low) {
        f_low = fi;
        i_low = i;
      }
    }
    f_up_final = f_up;
    f_low_final = f_low;
    if (i_up < 0 || i_low < 0 || f_low - f_up <= cfg.kkt_tol) {
      converged = true;
      break;
    }

    const int i = i_up, j = i_low;
    const int yi = data[i].y, yj = data[j].y;

    // Step t moves alpha_j by yj*t and alpha_i by -yi*t, keeping sum alpha*y.
    auto range_for = [&](double a0, int y, bool positive_direction) {
      // bounds on t from 0 <= a0 + dir*t <= c, dir = +-1
      const double dir = positive_direction ? 1.0 : -1.0;
      double lo = (dir > 0) ? -a0 : a0 - c;
      double hi = (dir > 0) ? c - a0 : a0;
      return std::pair<double, double>(lo, hi);
    };
    auto [lo_j, hi_j] = range_for(alpha[j], yj, yj > 0);
    auto [lo_i, hi_i] = range_for(alpha[i], yi, yi < 0);
    const double t_lo = std::max(lo_j, lo_i);
    const double t_hi = std::min(hi_j, hi_i);

    const double eta = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
    const double slope = f_of(i) - f_of(j);  // < 0 for a violating pair
    double t;
    if (eta > 1e-14) {
      t = std::clamp(slope / eta, t_lo, t_hi);
    } else {
      // Flat (or concave-degenerate) direction: objective is linear in t,
      // slope < 0, so the best feasible point is the lower end.
      t = t_lo;
    }
    if (t == 0.0) break;  // numerically stuck; report non-convergence

    const double da_j = static_cast<double>(yj) * t;
    const double da_i = -static_cast<double>(yi) * t;
    alpha[j] += da_j;
    alpha[i] += da_i;
    // Clean tiny drift off the box walls.
    alpha[j] = std::clamp(alpha[j], 0.0, c);
    alpha[i] = std::clamp(alpha[i], 0.0, c);

    const double wi = da_i * yi, wj = da_j * yj;
    for (int k = 0; k < n; ++k) g[k] += wi * gram(i, k) + wj * gram(j, k);
  }

  // Bias from unbound support vectors, else the midpoint of the feasible
  // interval [-f_up, -f_low].
  double bias = 0.0;
  int unbound = 0;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > kAlphaZero && alpha[i] < c - kAlphaZero) {
      bias += data[i].y - g[i];
      ++unbound;
    }
  }
  if (unbound > 0) {
    bias /= unbound;
  } else if (std::isfinite(f_up_final) && std::isfinite(f_low_final)) {
    bias = -(f_up_final + f_low_final) / 2.0;
  } else if (std::isfinite(f_up_final)) {
    bias = -f_up_final;
  } else if (std::isfinite(f_low_final)) {
    bias = -f_low_final;
  }

  TrainResult result;
  result.converged = converged;
  result.iterations = iters;
  result.model.kernel = kernel;
  result.model.c_reg = c;
  result.model.bias = bias;
  for (int i = 0; i < n; ++i) {
    if (alpha[i] > kAlphaZero) {
      result.model.support_vectors.push_back(data[i].m);
      result.model.alphas.push_back(alpha[i]);
      result.model.labels.push_back(data[i].y);
    }
  }
  return result;
}

SVMModel prune_dependent(const SVMModel& model, const TrainConfig& cfg) {
  validate(cfg);
  const int m = static_cast<int>(model.sv_count());
  if (m < 2) return model;

  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      gram(i, j) = gram(j, i) =
          kernel_eval(model.kernel, model.support_vectors[i],
                      model.support_vectors[j]);

  std::vector<int> remaining(m);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<double> beta(m);  // signed coefficients alpha_i * y_i
  for (int i = 0; i < m; ++i) beta[i] = model.alphas[i] * model.labels[i];

  // Least-squares fit of column k against the other remaining columns.
  // Returns the relative residual and the coefficients.
  auto fit_column = [&](int k, const std::vector<int>& pool,
                        Eigen::VectorXd& coeff) {
    const int p = static_cast<int>(pool.size());
    Eigen::MatrixXd a(p + 1, p - 1);
    Eigen::VectorXd b(p + 1);
    int col = 0;
    for (int j : pool) {
      if (j == k) continue;
      int row = 0;
      for (int i : pool) a(row++, col) = gram(i, j);
      a(row, col) = gram(k, j);
      ++col;
    }
    int row = 0;
    for (int i : pool) b(row++) = gram(i, k);
    b(row) = gram(k, k);

    const double bnorm = b.norm();
    if (bnorm == 0.0) {
      coeff = Eigen::VectorXd::Zero(p - 1);
      return 0.0;
    }
    coeff = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    return (a * coeff - b).norm() / bnorm;
  };

  // Order candidates by how well the initial full set explains them.
  std::vector<std::pair<double, int>> order;
  order.reserve(m);
  {
    Eigen::VectorXd coeff;
    for (int k = 0; k < m; ++k)
      order.emplace_back(fit_column(k, remaining, coeff), k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& [initial_residual, k] : order) {
    (void)initial_residual;
    if (remaining.size() < 2) break;
    if (std::find(remaining.begin(), remaining.end(), k) == remaining.end())
      continue;
    Eigen::VectorXd coeff;
    const double residual = fit_column(k, remaining, coeff);
    if (residual > cfg.prune_tol) continue;
    // Fold the removed vector's weight into the survivors.
    int col = 0;
    for (int j : remaining) {
      if (j == k) continue;
      beta[j] += coeff(col++) * beta[k];
    }
    remaining.erase(std::find(remaining.begin(), remaining.end(), k));
  }

  SVMModel out;
  out.kernel = model.kernel;
  out.c_reg = model.c_reg;
  out.bias = model.bias;
  for (int i : remaining) {
    if (std::abs(beta[i]) <= kAlphaZero) continue;
    out.support_vectors.push_back(model.support_vectors[i]);
    out.alphas.push_back(std::abs(beta[i]));
    out.labels.push_back(beta[i] > 0 ? 1 : -1);
  }
  return out;
}

double fused_score(const SVMModel& model, std::span<const double> m) {
  double acc = model.bias;
  for (std::size_t i = 0; i < model.sv_count(); ++i)
    acc += model.alphas[i] * model.labels[i] *
           kernel_eval(model.kernel, model.support_vectors[i], m);
  return acc;
}

int decide(const SVMModel& model, std::span<const double> m, double threshold) {
  return fused_score(model, m) - threshold >= 0.0 ? 1 : -1;
}

// ---- model file ----------------------------------------------------------------

std::string model_to_json(const SVMModel& model) {
  nlohmann::ordered_json j;
  j["version"] = kModelSchemaVersion;
  j["kernel"]["kind"] = model.kernel.kind == KernelKind::kLinear ? "linear" : "rbf";
  if (model.kernel.kind == KernelKind::kRbf)
    j["kernel"]["gamma"] = model.kernel.gamma;
  j["c_reg"] = model.c_reg;
  j["bias"] = model.bias;
  j["support_vectors"] = model.support_vectors;
  j["alphas"] = model.alphas;
  j["labels"] = model.labels;
  return j.dump();
}

SVMModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model: bad JSON: ") + e.what());
  }
  SVMModel model;
  try {
    const auto version = j.at("version").get<std::string>();
    if (version != kModelSchemaVersion)
      throw IoError("model: unsupported schema version '" + version + "'");
    const auto kind = j.at("kernel").at("kind").get<std::string>();
    if (kind == "linear") {
      model.kernel.kind = KernelKind::kLinear;
    } else if (kind == "rbf") {
      model.kernel.kind = KernelKind::kRbf;
      model.kernel.gamma = j.at("kernel").at("gamma").get<double>();
    } else {
      throw IoError("model: unknown kernel kind '" + kind + "'");
    }
    model.c_reg = j.at("c_reg").get<double>();
    model.bias = j.at("bias").get<double>();
    model.support_vectors =
        j.at("support_vectors").get<std::vector<std::vector<double>>>();
    model.alphas = j.at("alphas").get<std::vector<double>>();
    model.labels = j.at("labels").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model: missing field: ") + e.what());
  }
  if (model.alphas.size() != model.support_vectors.size() ||
      model.labels.size() != model.support_vectors.size())
    throw IoError("model: array lengths disagree");
  return model;
}

void save_model(const SVMModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("model: cannot write " + path.string());
  out << model_to_json(model) << "\n";
  if (!out) throw IoError("model: write failed for " + path.string());
}

SVMModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("model: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace sigid
