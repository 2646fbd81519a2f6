#ifndef SIGID_SVM_HPP_
#define SIGID_SVM_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigid {

inline constexpr const char* kModelSchemaVersion = "sigfuse-svm/1";

enum class KernelKind { kLinear, kRbf };

struct Kernel {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0 / 3.0;  // rbf only; default 1/input-dimension
};

double kernel_eval(const Kernel& k, std::span<const double> a,
                   std::span<const double> b);

struct SVMModel {
  Kernel kernel;
  double c_reg = 10.0;
  double bias = 0.0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alphas;  // each in (0, c_reg]
  std::vector<int> labels;     // +1 / -1

  std::size_t sv_count() const { return support_vectors.size(); }
};

struct TrainConfig {
  double c_reg = 10.0;
  double kkt_tol = 1e-3;
  int max_passes = 200000;   // bound on pairwise optimization steps
  double prune_tol = 1e-8;   // relative Gram residual accepted for pruning
  std::uint64_t seed = 0;    // impostor subsampling upstream; training itself
                             // is deterministic
};

void validate(const TrainConfig& cfg);

struct LabeledScore {
  std::vector<double> m;
  int y = 0;  // +1 genuine, -1 impostor
};

struct TrainResult {
  SVMModel model;
  bool converged = false;
  int iterations = 0;
};

/// Soft-margin dual solved by SMO with maximal-violating-pair working sets.
/// At convergence every example meets the KKT conditions within kkt_tol;
/// only alpha > 0 examples are retained. Throws on single-class input;
/// non-convergence is reported through the flag, not an exception.
TrainResult train(std::span<const LabeledScore> data, const Kernel& kernel,
                  const TrainConfig& cfg);

/// Remove support vectors whose kernel column is (numerically) linearly
/// dependent on the others, folding their weight into the survivors.
/// Greedy single pass, smallest initial residual first. Decision values on
/// any probe are preserved when the accepted residual is within prune_tol.
SVMModel prune_dependent(const SVMModel& model, const TrainConfig& cfg);

/// Raw decision value sum_i alpha_i y_i K(m, sv_i) + bias.
double fused_score(const SVMModel& model, std::span<const double> m);

/// sign(fused_score - threshold), with an exact 0 mapping to +1.
int decide(const SVMModel& model, std::span<const double> m,
           double threshold = 0.0);

// ---- model file ("sigfuse-svm/1") -------------------------------------------

std::string model_to_json(const SVMModel& model);
SVMModel model_from_json(std::string_view text);
void save_model(const SVMModel& model, const std::filesystem::path& path);
SVMModel load_model(const std::filesystem::path& path);

}  // namespace sigid

#endif  // SIGID_SVM_HPP_
