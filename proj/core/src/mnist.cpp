#include "pat/data/mnist.hpp"

#include "pat/data/vowels.hpp"  // stratified_split

#include <array>
#include <cmath>
#include <fstream>
#include <random>

namespace pat::data {

namespace {

std::uint32_t read_be32(std::istream& in, const char* what) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError(std::string("mnist: truncated file while reading ") + what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

}  // namespace

MnistData load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                         int limit) {
    std::ifstream fi(images_path, std::ios::binary);
    if (!fi) throw IoError("mnist: cannot open " + images_path);
    std::ifstream fl(labels_path, std::ios::binary);
    if (!fl) throw IoError("mnist: cannot open " + labels_path);

    if (read_be32(fi, "image magic") != 0x00000803u) {
        throw ParseError("mnist: bad image magic (want 0x00000803)", 0);
    }
    if (read_be32(fl, "label magic") != 0x00000801u) {
        throw ParseError("mnist: bad label magic (want 0x00000801)", 0);
    }
    const std::uint32_t n_images = read_be32(fi, "image count");
    const std::uint32_t rows = read_be32(fi, "rows");
    const std::uint32_t cols = read_be32(fi, "cols");
    const std::uint32_t n_labels = read_be32(fl, "label count");
    if (n_images != n_labels) throw ParseError("mnist: image/label counts disagree", 0);

    std::uint32_t n = n_images;
    if (limit >= 0) n = std::min<std::uint32_t>(n, static_cast<std::uint32_t>(limit));

    MnistData out;
    out.rows = static_cast<int>(rows);
    out.cols = static_cast<int>(cols);
    out.images.reserve(n);
    out.labels.reserve(n);
    std::vector<unsigned char> buf(rows * cols);
    for (std::uint32_t k = 0; k < n; ++k) {
        fi.read(reinterpret_cast<char*>(buf.data()), buf.size());
        if (!fi) throw IoError("mnist: truncated image data at record " + std::to_string(k));
        RealVector img(rows * cols);
        for (std::size_t i = 0; i < buf.size(); ++i) img[i] = buf[i] / 255.0;
        char lab = 0;
        fl.read(&lab, 1);
        if (!fl) throw IoError("mnist: truncated label data at record " + std::to_string(k));
        if (lab < 0 || lab > 9) throw ParseError("mnist: label outside 0..9", k);
        out.images.push_back(std::move(img));
        out.labels.push_back(lab);
    }
    return out;
}

RealVector avg_pool_2x2(const RealVector& image, int rows, int cols) {
    if (rows % 2 != 0 || cols % 2 != 0) throw DimensionError("avg_pool_2x2: odd image shape");
    require_dim(image, rows * cols, "avg_pool_2x2 image");
    const int orows = rows / 2, ocols = cols / 2;
    RealVector out(orows * ocols);
    for (int r = 0; r < orows; ++r) {
        for (int c = 0; c < ocols; ++c) {
            const int r0 = 2 * r, c0 = 2 * c;
            out[r * ocols + c] = 0.25 * (image[r0 * cols + c0] + image[r0 * cols + c0 + 1] +
                                         image[(r0 + 1) * cols + c0] + image[(r0 + 1) * cols + c0 + 1]);
        }
    }
    return out;
}

namespace {

// Segment layout: 0 top, 1 upper-left, 2 upper-right, 3 middle, 4 lower-left,
// 5 lower-right, 6 bottom.
constexpr std::array<std::array<bool, 7>, 10> kSegments = {{
    {true, true, true, false, true, true, true},     // 0
    {false, false, true, false, false, true, false}, // 1
    {true, false, true, true, true, false, true},    // 2
    {true, false, true, true, false, true, true},    // 3
    {false, true, true, true, false, true, false},   // 4
    {true, true, false, true, false, true, true},    // 5
    {true, true, false, true, true, true, true},     // 6
    {true, false, true, false, false, true, false},  // 7
    {true, true, true, true, true, true, true},      // 8
    {true, true, true, true, false, true, true},     // 9
}};

void draw_box(RealVector& img, int side, int r0, int r1, int c0, int c1, double v) {
    for (int r = std::max(0, r0); r <= std::min(side - 1, r1); ++r) {
        for (int c = std::max(0, c0); c <= std::min(side - 1, c1); ++c) {
            img[r * side + c] = std::min(1.0, img[r * side + c] + v);
        }
    }
}

}  // namespace

MnistData synth_digits(std::uint64_t seed, int n) {
    constexpr int side = 28;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> shift(-2, 2);
    std::uniform_real_distribution<double> amp(0.7, 1.0);
    std::normal_distribution<double> noise(0.0, 0.04);

    MnistData out;
    out.rows = out.cols = side;
    out.images.reserve(n);
    out.labels.reserve(n);

    for (int k = 0; k < n; ++k) {
        const int digit = k % 10;
        const int dr = shift(rng), dc = shift(rng);
        const double a = amp(rng);
        RealVector img = RealVector::Zero(side * side);
        const auto& seg = kSegments[digit];
        // glyph occupies rows 4..23, cols 8..19 before jitter; strokes 3 px wide
        const int top = 4 + dr, bot = 23 + dr, mid = 13 + dr;
        const int left = 8 + dc, right = 19 + dc;
        if (seg[0]) draw_box(img, side, top, top + 2, left, right, a);
        if (seg[1]) draw_box(img, side, top, mid, left, left + 2, a);
        if (seg[2]) draw_box(img, side, top, mid, right - 2, right, a);
        if (seg[3]) draw_box(img, side, mid - 1, mid + 1, left, right, a);
        if (seg[4]) draw_box(img, side, mid, bot, left, left + 2, a);
        if (seg[5]) draw_box(img, side, mid, bot, right - 2, right, a);
        if (seg[6]) draw_box(img, side, bot - 2, bot, left, right, a);
        for (int i = 0; i < side * side; ++i) {
            img[i] = std::min(1.0, std::max(0.0, img[i] + noise(rng)));
        }
        out.images.push_back(std::move(img));
        out.labels.push_back(digit);
    }
    return out;
}

train::Dataset make_mnist_dataset(const MnistData& raw, double test_fraction, std::uint64_t seed) {
    train::Dataset ds;
    ds.n_classes = 10;
    ds.x.reserve(raw.images.size());
    for (const auto& img : raw.images) {
        ds.x.push_back(avg_pool_2x2(img, raw.rows, raw.cols));
    }
    ds.label = raw.labels;
    ds.is_test = stratified_split(raw.labels, test_fraction, seed);
    ds.validate();
    return ds;
}

}  // namespace pat::data
