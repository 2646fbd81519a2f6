#ifndef SIGID_EVAL_HPP_
#define SIGID_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigid/features.hpp"
#include "sigid/matchers.hpp"
#include "sigid/svm.hpp"

namespace sigid {

inline constexpr const char* kCorpusSchemaVersion = "sigid-corpus/1";

// ---- corpus ------------------------------------------------------------------

struct CorpusSample {
  int sample_id = 0;
  std::filesystem::path path;  // raster file, relative paths resolved on load
};

struct CorpusSubject {
  int id = 0;
  bool genuine = true;
  int victim_id = -1;  // forged subject, -1 for genuine subjects
  std::vector<CorpusSample> samples;
};

struct Corpus {
  std::vector<CorpusSubject> subjects;
  std::uint64_t seed = 0;  // generator seed when synthetic, 0 otherwise
};

Corpus load_manifest(const std::filesystem::path& manifest_path);
void save_manifest(const Corpus& corpus, const std::filesystem::path& manifest_path);

/// Extracted features grouped the same way as the raster corpus.
struct FeatureCorpus {
  struct Subject {
    int id = 0;
    bool genuine = true;
    int victim_id = -1;
    std::vector<FeatureVec> samples;
  };
  std::vector<Subject> subjects;
};

/// Load every raster, run the preprocessing chain, extract features.
FeatureCorpus extract_corpus_features(const Corpus& corpus,
                                      const PreprocessConfig& cfg);

// ---- protocol ----------------------------------------------------------------

struct SplitPlan {
  struct SubjectSplit {
    int subject_id = 0;
    std::vector<int> enroll;  // sample indices
    std::vector<int> probe;
  };
  std::vector<SubjectSplit> subjects;  // genuine subjects only
  std::uint64_t seed = 0;
};

/// Seeded per-subject shuffle into disjoint enroll/probe sets. Throws
/// ProtocolError naming the first subject with too few samples.
SplitPlan split(const FeatureCorpus& corpus, int n_enroll, int n_probe,
                std::uint64_t seed);
SplitPlan split(const Corpus& corpus, int n_enroll, int n_probe,
                std::uint64_t seed);

struct RankedEntry {
  int subject_id = 0;
  double fused = 0;
  double ed = 0, md = 0, ge = 0;  // raw per-matcher scores vs this subject
};

/// Score the probe against every gallery subject and sort by fused score
/// descending, ties by ascending subject id. Returns the full ranking.
std::vector<RankedEntry> identify(const FeatureVec& probe,
                                  std::span<const SubjectStats> gallery,
                                  const SVMModel& fusion, const NormStats& norm,
                                  const MatcherConfig& mcfg);

struct CMCCurve {
  std::vector<double> probabilities;  // indexed by rank-1 .. rank-N
  int probe_count = 0;
};

/// probabilities[r-1] = |{ranks <= r}| / probe_count. Ranks are 1-based and
/// must lie in [1, n_subjects]; empty input is a protocol error.
CMCCurve cmc(std::span<const int> ranks, int n_subjects);

// ---- experiment ---------------------------------------------------------------

struct ExperimentConfig {
  PreprocessConfig preprocess;
  MatcherConfig matcher;
  Kernel kernel;
  TrainConfig train;
  int n_enroll = 6;
  int n_probe = 3;
  double impostor_ratio = 1.0;  // impostor:genuine training pairs after subsampling
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  int n_subjects = 0;
  int n_forgers = 0;
  int n_probes = 0;

  double rank1_ed = 0, rank1_md = 0, rank1_ge = 0, rank1_fused = 0;
  CMCCurve cmc_ed, cmc_md, cmc_ge, cmc_fused;

  int forgery_probes = 0;
  int forgery_rank1_hits = 0;  // forger samples whose victim topped the ranking

  bool svm_converged = false;
  int svm_iterations = 0;
  int sv_count = 0;
  int sv_count_pruned = 0;

  ExperimentConfig config;
};

/// Full protocol: split, per-subject fit, fusion training-score assembly
/// (enrolled-vs-own stats as genuine; enrolled-vs-other stats plus
/// forger-vs-victim as impostors, subsampled to impostor_ratio), SMO train +
/// prune, identification of every probe, CMC/rank-1 for the fused system and
/// each single matcher on the identical split.
ExperimentReport run_experiment(const FeatureCorpus& corpus,
                                const ExperimentConfig& cfg,
                                std::uint64_t seed);
ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& cfg,
                                std::uint64_t seed);

std::string report_to_json(const ExperimentReport& report);

/// CSV "rank,ed,md,ge,fused", one row per rank.
void write_cmc_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace sigid

#endif  // SIGID_EVAL_HPP_
