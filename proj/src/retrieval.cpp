#include "ordemb/retrieval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ordemb/order_loss.hpp"

namespace ordemb {

std::string direction_name(Direction d) {
  return d == Direction::kImageToText ? "image_to_text" : "text_to_image";
}

void SimilarityMatrix::validate() const {
  if (num_images == 0 || num_texts == 0) {
    throw std::invalid_argument("similarity matrix is empty");
  }
  if (scores.size() != num_images * num_texts) {
    throw std::invalid_argument("similarity matrix score buffer has wrong size");
  }
  if (image_to_texts.size() != num_images || text_to_image.size() != num_texts) {
    throw std::invalid_argument("similarity matrix ground truth has wrong size");
  }
  for (std::size_t i = 0; i < num_images; ++i) {
    if (image_to_texts[i].empty()) {
      throw std::invalid_argument("image " + std::to_string(i) +
                                  " has no ground-truth caption");
    }
    for (std::size_t j : image_to_texts[i]) {
      if (j >= num_texts || text_to_image[j] != i) {
        throw std::invalid_argument("inconsistent ground truth for image " +
                                    std::to_string(i));
      }
    }
  }
}

SimilarityMatrix rank_matrix(const std::vector<std::vector<double>>& image_embeddings,
                             const std::vector<std::vector<double>>& text_embeddings,
                             const std::vector<std::size_t>& text_to_image,
                             bool image_first_argument) {
  if (image_embeddings.empty() || text_embeddings.empty()) {
    throw std::invalid_argument("rank_matrix needs a nonempty split");
  }
  if (text_to_image.size() != text_embeddings.size()) {
    throw std::invalid_argument("rank_matrix: one ground-truth image per caption required");
  }
  SimilarityMatrix sim;
  sim.num_images = image_embeddings.size();
  sim.num_texts = text_embeddings.size();
  sim.scores.resize(sim.num_images * sim.num_texts);
  sim.image_to_texts.resize(sim.num_images);
  sim.text_to_image = text_to_image;
  for (std::size_t j = 0; j < text_to_image.size(); ++j) {
    if (text_to_image[j] >= sim.num_images) {
      throw std::invalid_argument("caption " + std::to_string(j) +
                                  " points at image " + std::to_string(text_to_image[j]) +
                                  " outside the split");
    }
    sim.image_to_texts[text_to_image[j]].push_back(j);
  }
  for (std::size_t i = 0; i < sim.num_images; ++i) {
    const auto& img = image_embeddings[i];
    for (std::size_t j = 0; j < sim.num_texts; ++j) {
      const auto& txt = text_embeddings[j];
      sim.scores[i * sim.num_texts + j] =
          image_first_argument ? order_penalty(img, txt) : order_penalty(txt, img);
    }
  }
  sim.validate();
  return sim;
}

namespace {

// Rank of candidate `c` for one query under descending score with ties
// broken by ascending index: 1 + #better + #equal-with-smaller-index.
template <typename ScoreAt>
std::size_t candidate_rank(ScoreAt&& score_at, std::size_t num_candidates, std::size_t c) {
  const double sc = score_at(c);
  std::size_t rank = 1;
  for (std::size_t o = 0; o < num_candidates; ++o) {
    if (o == c) continue;
    const double so = score_at(o);
    if (so > sc || (so == sc && o < c)) ++rank;
  }
  return rank;
}

// Best (smallest) ground-truth rank for every query in the given direction.
std::vector<std::size_t> ground_truth_ranks(const SimilarityMatrix& sim, Direction dir) {
  sim.validate();
  std::vector<std::size_t> ranks;
  if (dir == Direction::kImageToText) {
    ranks.reserve(sim.num_images);
    for (std::size_t i = 0; i < sim.num_images; ++i) {
      const auto score_at = [&](std::size_t j) { return sim.score(i, j); };
      std::size_t best = sim.num_texts + 1;
      for (std::size_t j : sim.image_to_texts[i]) {
        best = std::min(best, candidate_rank(score_at, sim.num_texts, j));
      }
      ranks.push_back(best);
    }
  } else {
    ranks.reserve(sim.num_texts);
    for (std::size_t j = 0; j < sim.num_texts; ++j) {
      const auto score_at = [&](std::size_t i) { return sim.score(i, j); };
      ranks.push_back(candidate_rank(score_at, sim.num_images, sim.text_to_image[j]));
    }
  }
  return ranks;
}

}  // namespace

double recall_at_k(const SimilarityMatrix& sim, std::size_t k, Direction direction) {
  const std::size_t candidates =
      direction == Direction::kImageToText ? sim.num_texts : sim.num_images;
  if (k < 1 || k > candidates) {
    throw std::invalid_argument("recall_at_k: k = " + std::to_string(k) +
                                " out of range for " + std::to_string(candidates) +
                                " candidates");
  }
  const std::vector<std::size_t> ranks = ground_truth_ranks(sim, direction);
  std::size_t hits = 0;
  for (std::size_t r : ranks) {
    if (r <= k) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(ranks.size());
}

RankStats rank_stats(const SimilarityMatrix& sim, Direction direction) {
  std::vector<std::size_t> ranks = ground_truth_ranks(sim, direction);
  RankStats stats;
  double sum = 0.0;
  for (std::size_t r : ranks) sum += static_cast<double>(r);
  stats.mean_r = sum / static_cast<double>(ranks.size());
  std::sort(ranks.begin(), ranks.end());
  const std::size_t n = ranks.size();
  if (n % 2 == 1) {
    stats.med_r = static_cast<double>(ranks[n / 2]);
  } else {
    stats.med_r = 0.5 * (static_cast<double>(ranks[n / 2 - 1]) +
                         static_cast<double>(ranks[n / 2]));
  }
  return stats;
}

RetrievalReport make_report(const SimilarityMatrix& sim, Direction direction) {
  const std::size_t candidates =
      direction == Direction::kImageToText ? sim.num_texts : sim.num_images;
  RetrievalReport report;
  report.direction = direction;
  report.r_at_1 = recall_at_k(sim, 1, direction);
  report.r_at_10 = recall_at_k(sim, std::min<std::size_t>(10, candidates), direction);
  const RankStats stats = rank_stats(sim, direction);
  report.med_r = stats.med_r;
  report.mean_r = stats.mean_r;
  return report;
}

BidirectionalReport make_bidirectional_report(const SimilarityMatrix& sim) {
  return {make_report(sim, Direction::kImageToText),
          make_report(sim, Direction::kTextToImage)};
}

KfoldReport kfold_report(const std::vector<SimilarityMatrix>& folds) {
  if (folds.empty()) {
    throw std::invalid_argument("kfold_report needs at least one fold");
  }
  KfoldReport out;
  out.folds.reserve(folds.size());
  for (const auto& sim : folds) {
    out.folds.push_back(make_bidirectional_report(sim));
  }
  const double n = static_cast<double>(out.folds.size());
  auto avg = [&](auto pick) {
    double acc = 0.0;
    for (const auto& f : out.folds) acc += pick(f);
    return acc / n;
  };
  out.average.image_to_text.direction = Direction::kImageToText;
  out.average.image_to_text.r_at_1 = avg([](const auto& f) { return f.image_to_text.r_at_1; });
  out.average.image_to_text.r_at_10 = avg([](const auto& f) { return f.image_to_text.r_at_10; });
  out.average.image_to_text.med_r = avg([](const auto& f) { return f.image_to_text.med_r; });
  out.average.image_to_text.mean_r = avg([](const auto& f) { return f.image_to_text.mean_r; });
  out.average.text_to_image.direction = Direction::kTextToImage;
  out.average.text_to_image.r_at_1 = avg([](const auto& f) { return f.text_to_image.r_at_1; });
  out.average.text_to_image.r_at_10 = avg([](const auto& f) { return f.text_to_image.r_at_10; });
  out.average.text_to_image.med_r = avg([](const auto& f) { return f.text_to_image.med_r; });
  out.average.text_to_image.mean_r = avg([](const auto& f) { return f.text_to_image.mean_r; });
  return out;
}

std::string format_report_table(const KfoldReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1);
  os << std::setw(10) << "" << "  "
     << std::setw(29) << std::left << "Image to text" << std::right
     << std::setw(28) << std::left << "Text to image" << std::right << "\n";
  auto header = [&]() {
    os << std::setw(6) << "R@1" << std::setw(7) << "R@10"
       << std::setw(7) << "Med r" << std::setw(8) << "Mean r";
  };
  os << std::setw(10) << "Fold" << "  ";
  header();
  os << " ";
  header();
  os << "\n";
  auto row = [&](const std::string& name, const BidirectionalReport& r) {
    os << std::setw(10) << name << "  ";
    os << std::setw(6) << r.image_to_text.r_at_1 << std::setw(7) << r.image_to_text.r_at_10
       << std::setw(7) << r.image_to_text.med_r << std::setw(8) << r.image_to_text.mean_r;
    os << " ";
    os << std::setw(6) << r.text_to_image.r_at_1 << std::setw(7) << r.text_to_image.r_at_10
       << std::setw(7) << r.text_to_image.med_r << std::setw(8) << r.text_to_image.mean_r;
    os << "\n";
  };
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    row("fold " + std::to_string(f), report.folds[f]);
  }
  if (report.folds.size() > 1) {
    row("average", report.average);
  }
  return os.str();
}

}  // namespace ordemb
