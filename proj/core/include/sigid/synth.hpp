#ifndef SIGID_SYNTH_HPP_
#define SIGID_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include "sigid/eval.hpp"
#include "sigid/image.hpp"

namespace sigid {

/// Synthetic signature corpus generator. Each subject gets a random "style"
/// of 2-5 spline strokes with varying pen width and an ink-pressure gradient;
/// genuine samples jitter the style slightly, forgery samples trace a victim's
/// style with larger jitter and uniform pen pressure. Fully deterministic
/// under `seed`.
struct SynthConfig {
  int n_subjects = 40;         // genuine subjects
  int n_samples = 9;           // samples per subject (genuine and forger alike)
  int n_forger_subjects = 8;   // forgers; victims assigned round-robin
  int canvas_width = 400;
  int canvas_height = 200;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

/// Render one sample in memory. `forgery` selects the tracing behavior; the
/// style is the victim's for forgeries, the subject's own otherwise.
GrayImage render_signature(const SynthConfig& cfg, std::uint64_t style_seed,
                           std::uint64_t sample_seed, bool forgery);

/// Write all rasters as PGM plus manifest.json into out_dir; returns the
/// corpus with paths resolved against out_dir.
Corpus synth_corpus(const SynthConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace sigid

#endif  // SIGID_SYNTH_HPP_
