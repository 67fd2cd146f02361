#pragma once

#include <string>
#include <vector>

namespace ordemb {

enum class Direction { kImageToText, kTextToImage };

std::string direction_name(Direction d);

// Cross-product of order penalties for one evaluation split plus the ground
// truth. scores[i * num_texts + j] = s(text_j, image_i) (or the swapped
// argument order when requested at build time). Higher is more similar.
struct SimilarityMatrix {
  std::size_t num_images = 0;
  std::size_t num_texts = 0;
  std::vector<double> scores;
  std::vector<std::vector<std::size_t>> image_to_texts;  // >= 1 caption each
  std::vector<std::size_t> text_to_image;                // exactly 1 image each

  double score(std::size_t image, std::size_t text) const {
    return scores[image * num_texts + text];
  }
  void validate() const;
};

SimilarityMatrix rank_matrix(const std::vector<std::vector<double>>& image_embeddings,
                             const std::vector<std::vector<double>>& text_embeddings,
                             const std::vector<std::size_t>& text_to_image,
                             bool image_first_argument = false);

// Percentage of queries whose ground truth appears in the first k candidates
// when sorted by descending similarity (ties broken by ascending candidate
// index). An image query with several captions scores a hit when any of them
// makes the cut.
double recall_at_k(const SimilarityMatrix& sim, std::size_t k, Direction direction);

struct RankStats {
  double med_r = 0.0;
  double mean_r = 0.0;
};

// 1-based rank of the best-ranked ground-truth item per query; median uses
// the mean of the two middle values for an even query count.
RankStats rank_stats(const SimilarityMatrix& sim, Direction direction);

struct RetrievalReport {
  Direction direction = Direction::kImageToText;
  double r_at_1 = 0.0;
  double r_at_10 = 0.0;
  double med_r = 0.0;
  double mean_r = 0.0;
};

struct BidirectionalReport {
  RetrievalReport image_to_text;
  RetrievalReport text_to_image;
};

// R@10 is computed at k = min(10, candidate count) so tiny splits stay legal.
RetrievalReport make_report(const SimilarityMatrix& sim, Direction direction);
BidirectionalReport make_bidirectional_report(const SimilarityMatrix& sim);

struct KfoldReport {
  std::vector<BidirectionalReport> folds;
  BidirectionalReport average;
};

KfoldReport kfold_report(const std::vector<SimilarityMatrix>& folds);

// Aligned table, one row per fold plus the average, both directions.
std::string format_report_table(const KfoldReport& report);

}  // namespace ordemb
