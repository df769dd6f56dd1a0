#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "families.hpp"
#include "iqa/color.hpp"

namespace iqa::families {
namespace {

using Palette = std::vector<std::array<double, 3>>;

// Replaces each pixel with the mean colour of its class. Classes that end up
// empty simply contribute no colour.
ImageBuf paint_class_means(const ImageBuf& img, const std::vector<int>& label, int classes) {
  Palette sum(classes, {0.0, 0.0, 0.0});
  std::vector<std::size_t> count(classes, 0);
  auto src = img.pixels();
  for (std::size_t p = 0; p < label.size(); ++p) {
    for (int c = 0; c < 3; ++c) sum[label[p]][c] += src[p * 3 + c];
    ++count[label[p]];
  }
  for (int k = 0; k < classes; ++k) {
    if (count[k] == 0) continue;
    for (int c = 0; c < 3; ++c) sum[k][c] /= static_cast<double>(count[k]);
  }
  ImageBuf out(img.width(), img.height());
  auto dst = out.pixels();
  for (std::size_t p = 0; p < label.size(); ++p) {
    for (int c = 0; c < 3; ++c) dst[p * 3 + c] = sum[label[p]][c];
  }
  out.clamp();
  return out;
}

std::vector<double> luma_of(const ImageBuf& img) {
  auto px = img.pixels();
  std::vector<double> y(img.pixel_count());
  for (std::size_t p = 0; p < y.size(); ++p) y[p] = luma(px[p * 3], px[p * 3 + 1], px[p * 3 + 2]);
  return y;
}

}  // namespace

ImageBuf quantize_hist_equal(const ImageBuf& img, int classes) {
  classes = std::max(classes, 1);
  const auto y = luma_of(img);
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  std::vector<int> label(y.size());
  const std::size_t n = y.size();
  for (std::size_t rank = 0; rank < n; ++rank) {
    label[order[rank]] = static_cast<int>(rank * static_cast<std::size_t>(classes) / n);
  }
  return paint_class_means(img, label, classes);
}

ImageBuf quantize_median_cut(const ImageBuf& img, int classes) {
  classes = std::max(classes, 1);
  auto px = img.pixels();
  const std::size_t n = img.pixel_count();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  struct Box {
    std::size_t begin, end;
  };
  std::vector<Box> boxes{{0, n}};

  auto widest_axis = [&](const Box& b) {
    std::array<double, 3> lo{1.0, 1.0, 1.0};
    std::array<double, 3> hi{0.0, 0.0, 0.0};
    for (std::size_t i = b.begin; i < b.end; ++i) {
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], px[idx[i] * 3 + c]);
        hi[c] = std::max(hi[c], px[idx[i] * 3 + c]);
      }
    }
    int axis = 0;
    for (int c = 1; c < 3; ++c) {
      if (hi[c] - lo[c] > hi[axis] - lo[axis]) axis = c;
    }
    return std::pair<int, double>{axis, hi[axis] - lo[axis]};
  };

  while (static_cast<int>(boxes.size()) < classes) {
    // Split the box with the widest colour range along its widest channel.
    int pick = -1;
    int pick_axis = 0;
    double pick_range = 0.0;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      if (boxes[b].end - boxes[b].begin < 2) continue;
      auto [axis, range] = widest_axis(boxes[b]);
      if (range > pick_range) {
        pick = static_cast<int>(b);
        pick_axis = axis;
        pick_range = range;
      }
    }
    if (pick < 0) break;
    Box box = boxes[pick];
    std::sort(idx.begin() + box.begin, idx.begin() + box.end, [&](std::size_t a, std::size_t b) {
      const double va = px[a * 3 + pick_axis];
      const double vb = px[b * 3 + pick_axis];
      return va < vb || (va == vb && a < b);
    });
    // Cut at the median, nudged so equal values never straddle the cut.
    std::size_t mid = box.begin + (box.end - box.begin) / 2;
    const double median = px[idx[mid] * 3 + pick_axis];
    std::size_t cut = mid;
    while (cut > box.begin && px[idx[cut - 1] * 3 + pick_axis] == median) --cut;
    if (cut == box.begin) {
      cut = mid;
      while (cut < box.end && px[idx[cut] * 3 + pick_axis] == median) ++cut;
    }
    boxes[pick] = {box.begin, cut};
    boxes.push_back({cut, box.end});
  }

  std::vector<int> label(n);
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    for (std::size_t i = boxes[b].begin; i < boxes[b].end; ++i) label[idx[i]] = static_cast<int>(b);
  }
  return paint_class_means(img, label, static_cast<int>(boxes.size()));
}

ImageBuf quantize_otsu(const ImageBuf& img, int classes) {
  constexpr int kBins = 256;
  classes = std::clamp(classes, 1, kBins);
  const auto y = luma_of(img);
  std::vector<int> bin(y.size());
  std::array<double, kBins> hist{};
  for (std::size_t p = 0; p < y.size(); ++p) {
    bin[p] = static_cast<int>(std::lround(std::clamp(y[p], 0.0, 1.0) * (kBins - 1)));
    hist[bin[p]] += 1.0;
  }
  // Prefix sums over bins: count and first moment.
  std::array<double, kBins + 1> cnt{};
  std::array<double, kBins + 1> mom{};
  for (int b = 0; b < kBins; ++b) {
    cnt[b + 1] = cnt[b] + hist[b];
    mom[b + 1] = mom[b] + hist[b] * b;
  }
  // Between-class variance is maximized by maximizing sum_k S_k^2 / W_k over
  // contiguous bin ranges; exact dynamic program instead of brute force.
  auto score = [&](int a, int b) {  // bins [a, b)
    const double w = cnt[b] - cnt[a];
    if (w <= 0.0) return 0.0;
    const double s = mom[b] - mom[a];
    return s * s / w;
  };
  const double kNeg = -1.0;
  std::vector<std::vector<double>> best(classes + 1, std::vector<double>(kBins + 1, kNeg));
  std::vector<std::vector<int>> split(classes + 1, std::vector<int>(kBins + 1, 0));
  for (int j = 0; j <= kBins; ++j) best[1][j] = score(0, j);
  for (int k = 2; k <= classes; ++k) {
    for (int j = 0; j <= kBins; ++j) {
      for (int i = 0; i <= j; ++i) {
        if (best[k - 1][i] < 0.0) continue;
        const double v = best[k - 1][i] + score(i, j);
        if (v > best[k][j]) {
          best[k][j] = v;
          split[k][j] = i;
        }
      }
    }
  }
  // Recover upper bin boundaries of each class.
  std::vector<int> upper(classes);
  int j = kBins;
  for (int k = classes; k >= 1; --k) {
    upper[k - 1] = j;
    j = k > 1 ? split[k][j] : 0;
  }
  std::array<int, kBins> class_of{};
  int k = 0;
  for (int b = 0; b < kBins; ++b) {
    while (b >= upper[k]) ++k;
    class_of[b] = k;
  }
  std::vector<int> label(y.size());
  for (std::size_t p = 0; p < y.size(); ++p) label[p] = class_of[bin[p]];
  return paint_class_means(img, label, classes);
}

}  // namespace iqa::families
