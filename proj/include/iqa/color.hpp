#pragma once

#include "iqa/image.hpp"

namespace iqa {

// HSV buffers reuse ImageBuf with channels (H, S, V); hue is stored in turns,
// so H lies in [0,1).
ImageBuf rgb_to_hsv(const ImageBuf& rgb);
ImageBuf hsv_to_rgb(const ImageBuf& hsv);

// BT.601 full range. Channels are (Y, Cb, Cr); chroma is neutral at 0.5.
ImageBuf rgb_to_ycbcr(const ImageBuf& rgb);
ImageBuf ycbcr_to_rgb(const ImageBuf& ycc);

struct Rgb {
  double r, g, b;
};
struct Hsv {
  double h, s, v;
};
struct YCbCr {
  double y, cb, cr;
};

Hsv rgb_to_hsv(Rgb p);
Rgb hsv_to_rgb(Hsv p);
YCbCr rgb_to_ycbcr(Rgb p);
Rgb ycbcr_to_rgb(YCbCr p);

/// BT.601 luma of an RGB triple.
inline double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

}  // namespace iqa
