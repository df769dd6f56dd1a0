#include <cmath>

#include "families.hpp"
#include "iqa/io.hpp"

namespace iqa::families {

ImageBuf jpeg(const ImageBuf& img, int quality) { return jpeg_round_trip(img, quality); }

ImageBuf jpeg2000(const ImageBuf& img, double target_db) {
  // The codec's rate knob is 1000/ratio in integer steps. PSNR rises with the
  // knob, so bisect for the smallest knob (strongest compression) that still
  // meets the target.
  auto encode = [&](int x1000) { return jpeg2000_round_trip(img, 1000.0 / x1000); };
  int lo = 1;
  int hi = 1000;
  ImageBuf best = encode(lo);
  if (psnr(img, best) >= target_db) return best;
  best = encode(hi);
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    ImageBuf candidate = encode(mid);
    if (psnr(img, candidate) >= target_db) {
      hi = mid;
      best = std::move(candidate);
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace iqa::families
