#pragma once

#include "podvs/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace podvs {

struct MetricConfig {
  int repeats = 100;
  int kld_bins = 20;
  double kld_epsilon = 1e-6;
  double nss_threshold = 0.7;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Point {
  int x = 0;
  int y = 0;
};

/// Fixations grouped by video and frame.
class FixationSet {
 public:
  FixationSet() = default;
  explicit FixationSet(const std::vector<FixationRecord>& records);

  void add(const FixationRecord& r);

  [[nodiscard]] bool empty() const { return count_ == 0; }
  [[nodiscard]] long size() const { return count_; }
  [[nodiscard]] std::vector<std::string> videos() const;
  [[nodiscard]] std::vector<int> frames(const std::string& video) const;
  [[nodiscard]] std::vector<Point> at(const std::string& video, int frame) const;
  /// Every fixation from videos other than `video`.
  [[nodiscard]] std::vector<Point> pool_excluding(const std::string& video) const;

 private:
  std::map<std::string, std::map<int, std::vector<Point>>> by_video_;
  long count_ = 0;
};

/// Saliency maps per video, indexed by frame number.
using VideoMaps = std::map<std::string, std::vector<FieldMap>>;

/// Map value at a fixation, with coordinates clamped to the map.
double sample_at(const FieldMap& m, Point p);

/// Area under the ROC curve of positives vs negatives; ties count one half.
double auc_from_samples(const std::vector<double>& positives, const std::vector<double>& negatives);

/// KL(positives || negatives) over `bins` histogram bins on [0, 1], epsilon-smoothed.
double kl_from_samples(const std::vector<double>& positives, const std::vector<double>& negatives, int bins,
                       double epsilon);

struct Coverage {
  int videos = 0;
  int frames_scored = 0;
  int frames_skipped = 0;  // no fixations, or no map for the frame
};

struct ShuffledScore {
  double value = 0.0;
  std::map<std::string, double> per_video;
  Coverage coverage;
};

/// Shuffled AUC: negatives drawn with replacement from other videos' fixations,
/// as many as the frame's positives, repeated cfg.repeats times. Averaged over
/// frames, then over videos.
ShuffledScore shuffled_auc(const VideoMaps& maps, const FixationSet& fixations, const FixationSet& negatives_pool,
                           const MetricConfig& cfg = {});

/// Shuffled KL divergence, sampled the same way as shuffled_auc.
ShuffledScore shuffled_kld(const VideoMaps& maps, const FixationSet& fixations, const FixationSet& negatives_pool,
                           const MetricConfig& cfg = {});

/// Pearson correlation over all pixels. Throws if either map has zero variance.
double pcc(const FieldMap& a, const FieldMap& b);

/// Mean of `test` over pixels where `reference` >= threshold.
double nss(const FieldMap& reference, const FieldMap& test, double threshold = 0.7);

}  // namespace podvs
