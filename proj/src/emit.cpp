#include "dilation/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dilation {

std::array<std::uint8_t, 3> signed_colormap(double value, double max_abs) {
    if (max_abs <= 0) max_abs = 1;
    double t = std::clamp(value / max_abs, -1.0, 1.0);
    // neutral near-white at 0; amber for t < 0, deep blue for t > 0
    const std::array<double, 3> zero{0.96, 0.96, 0.94};
    const std::array<double, 3> neg{0.95, 0.65, 0.05};
    const std::array<double, 3> pos{0.08, 0.15, 0.55};
    const std::array<double, 3>& end = t < 0 ? neg : pos;
    double a = std::abs(t);
    std::array<std::uint8_t, 3> rgb{};
    for (int c = 0; c < 3; ++c) {
        double v = zero[c] * (1 - a) + end[c] * a;
        rgb[c] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return rgb;
}

Image raster_tile_values(const LiftedFunction& data, const RasterSpec& spec) {
    if (data.cells.empty()) throw std::invalid_argument("raster_tile_values: empty data");
    if (spec.width < 1 || spec.height < 1 || !(spec.x_min < spec.x_max) ||
        !(spec.y_min < spec.y_max))
        throw std::invalid_argument("raster_tile_values: bad raster spec");

    unsigned depth = spec.sampling_depth;
    std::size_t total = 0;
    for (auto& [addr, value] : data.cells) {
        if (addr.kind != DilationKind::TwinDragonPlane)
            throw std::invalid_argument("raster_tile_values: plane addresses required");
        unsigned n = static_cast<unsigned>(addr.digits.size());
        if (n > depth) depth = n;
    }
    for (auto& [addr, value] : data.cells) {
        total += std::size_t(1) << (depth - addr.digits.size());
        if (total > spec.sample_cap)
            throw std::invalid_argument("raster_tile_values: sampling depth exceeds cap");
    }

    double max_abs = 0;
    for (auto& [addr, value] : data.cells) max_abs = std::max(max_abs, std::abs(value));

    Image image;
    image.width = spec.width;
    image.height = spec.height;
    image.rgb.assign(std::size_t(3) * spec.width * spec.height, 255);

    double sx = spec.width / (spec.x_max - spec.x_min);
    double sy = spec.height / (spec.y_max - spec.y_min);

    for (auto& [addr, value] : data.cells) {
        auto [rx, ry] = address_point(addr);
        double base_x = rx.to_double();
        double base_y = ry.to_double();
        auto rgb = signed_colormap(value, max_abs);
        unsigned extra = depth - static_cast<unsigned>(addr.digits.size());

        // Walk the 2^extra extensions; offsets accumulate tail digit weights
        // M^-j for j in (n, depth].
        std::vector<std::pair<double, double>> weights;
        {
            double wx = 1, wy = 0;
            for (unsigned j = 0; j < depth; ++j) {
                double nx = (wx + wy) / 2.0;
                double ny = (wy - wx) / 2.0;
                wx = nx;
                wy = ny;
                if (j >= addr.digits.size()) weights.emplace_back(wx, wy);
            }
        }
        for (std::size_t code = 0; code < (std::size_t(1) << extra); ++code) {
            double x = base_x, y = base_y;
            for (unsigned b = 0; b < extra; ++b) {
                if (code & (std::size_t(1) << b)) {
                    x += weights[b].first;
                    y += weights[b].second;
                }
            }
            auto px = static_cast<std::int64_t>(std::floor((x - spec.x_min) * sx));
            auto py = static_cast<std::int64_t>(std::floor((spec.y_max - y) * sy));
            if (px < 0 || py < 0 || px >= static_cast<std::int64_t>(spec.width) ||
                py >= static_cast<std::int64_t>(spec.height))
                continue;
            std::size_t at = 3 * (static_cast<std::size_t>(py) * spec.width + px);
            image.rgb[at] = rgb[0];
            image.rgb[at + 1] = rgb[1];
            image.rgb[at + 2] = rgb[2];
        }
    }
    return image;
}

std::string encode_ppm(const Image& image) {
    std::ostringstream out;
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    return out.str();
}

std::string encode_pgm(const Image& image) {
    std::ostringstream out;
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    for (std::size_t i = 0; i < image.rgb.size(); i += 3) {
        double luma = 0.2126 * image.rgb[i] + 0.7152 * image.rgb[i + 1] + 0.0722 * image.rgb[i + 2];
        out.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(luma))));
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace dilation
