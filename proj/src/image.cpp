#include "pvscan/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "pvscan/fileio.hpp"

namespace pvscan {

GrayImage GrayImage::filled(int width, int height, int bit_depth, std::uint16_t value) {
    if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be >= 1");
    if (bit_depth != 8 && bit_depth != 16) throw InvalidArgument("bit depth must be 8 or 16");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.bit_depth = bit_depth;
    img.samples.assign(static_cast<std::size_t>(width) * height, value);
    img.valid.assign(static_cast<std::size_t>(width) * height, 1);
    return img;
}

namespace {

// Reads the next decimal token of a PNM header, skipping whitespace and
// '#' comments that run to end of line.
bool next_header_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos, long& value) {
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) return false;
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1000000000L) return false;
        ++pos;
    }
    value = v;
    return true;
}

}  // namespace

GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw UnsupportedFormat("not a PNM file");
    if (bytes[1] != '5') {
        throw UnsupportedFormat(std::string("unsupported PNM magic P") +
                                static_cast<char>(bytes[1]) + ", expected P5");
    }
    std::size_t pos = 2;
    long w = 0, h = 0, maxval = 0;
    if (!next_header_token(bytes, pos, w) || !next_header_token(bytes, pos, h) ||
        !next_header_token(bytes, pos, maxval)) {
        throw MalformedHeader("PGM header is not <P5> <width> <height> <maxval>");
    }
    if (w < 1 || h < 1) throw MalformedHeader("PGM dimensions must be >= 1");
    if (maxval < 1 || maxval > 65535) throw MalformedHeader("PGM maxval out of range");
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw MalformedHeader("missing whitespace before PGM raster");
    }
    ++pos;

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.bit_depth = maxval <= 255 ? 8 : 16;
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::size_t bytes_per_sample = img.bit_depth == 8 ? 1 : 2;
    if (bytes.size() - pos < count * bytes_per_sample) {
        throw TruncatedData("PGM raster shorter than width*height samples");
    }
    img.samples.resize(count);
    img.valid.assign(count, 1);
    if (img.bit_depth == 8) {
        for (std::size_t i = 0; i < count; ++i) img.samples[i] = bytes[pos + i];
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            img.samples[i] = static_cast<std::uint16_t>((bytes[pos + 2 * i] << 8) |
                                                        bytes[pos + 2 * i + 1]);
        }
    }
    return img;
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    char header[64];
    const int maxval = img.max_value();
    const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n%d\n", img.width,
                                img.height, maxval);
    std::vector<std::uint8_t> out(header, header + n);
    if (img.bit_depth == 8) {
        for (std::uint16_t s : img.samples) out.push_back(static_cast<std::uint8_t>(s));
    } else {
        for (std::uint16_t s : img.samples) {
            out.push_back(static_cast<std::uint8_t>(s >> 8));
            out.push_back(static_cast<std::uint8_t>(s & 0xff));
        }
    }
    return out;
}

GrayImage load_pgm_file(const std::string& path) { return load_pgm(read_binary_file(path)); }

void save_pgm_file(const GrayImage& img, const std::string& path) {
    write_binary_file(path, save_pgm(img));
}

double temperature_at(const TempCalibration& calib, double p) {
    return calib.t_low_c +
           (p - calib.p_low) * (calib.t_high_c - calib.t_low_c) / (calib.p_high - calib.p_low);
}

GrayImage mask_overlay(const GrayImage& img, const std::vector<MaskRegion>& regions) {
    GrayImage out = img;
    for (const MaskRegion& r : regions) {
        const int x0 = std::max(r.x, 0);
        const int y0 = std::max(r.y, 0);
        const int x1 = std::min(r.x + r.w, img.width);
        const int y1 = std::min(r.y + r.h, img.height);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) out.valid[out.index(x, y)] = 0;
        }
    }
    return out;
}

std::uint16_t valid_percentile(const GrayImage& img, double pct) {
    if (pct < 0.0 || pct > 100.0) throw InvalidArgument("percentile must be in [0, 100]");
    std::vector<std::uint16_t> vals;
    vals.reserve(img.samples.size());
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        if (img.valid[i]) vals.push_back(img.samples[i]);
    }
    if (vals.empty()) throw InvalidArgument("no valid pixels for percentile");
    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return vals[rank - 1];
}

StretchResult contrast_stretch(const GrayImage& img, double lo_pct, double hi_pct,
                               const TempCalibration& calib) {
    if (!(0.0 <= lo_pct && lo_pct < hi_pct && hi_pct <= 100.0)) {
        throw InvalidArgument("need 0 <= lo_pct < hi_pct <= 100");
    }
    const bool any_valid =
        std::any_of(img.valid.begin(), img.valid.end(), [](std::uint8_t v) { return v != 0; });
    if (!any_valid) return {img, calib, true};

    const double a = valid_percentile(img, lo_pct);
    const double b = valid_percentile(img, hi_pct);
    if (a == b) return {img, calib, true};

    const double pmax = img.max_value();
    GrayImage out = img;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const double scaled =
            std::clamp((static_cast<double>(img.samples[i]) - a) * pmax / (b - a), 0.0, pmax);
        out.samples[i] = static_cast<std::uint16_t>(std::llround(scaled));
    }

    // Re-anchor so that intensity 0 maps to the old temperature at a and
    // Pmax to the old temperature at b.
    TempCalibration adjusted;
    const double t_at_a = temperature_at(calib, a);
    const double t_at_b = temperature_at(calib, b);
    if (t_at_b >= t_at_a) {
        adjusted = {t_at_b, t_at_a, pmax, 0.0};
    } else {
        adjusted = {t_at_a, t_at_b, 0.0, pmax};
    }
    return {std::move(out), adjusted, false};
}

CalibrationSidecar sidecar_from_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sidecar is not valid JSON: ") + e.what());
    }
    CalibrationSidecar sc;
    try {
        sc.calib.t_high_c = j.at("t_high_c").get<double>();
        sc.calib.t_low_c = j.at("t_low_c").get<double>();
        sc.calib.p_high = j.at("p_high").get<double>();
        sc.calib.p_low = j.at("p_low").get<double>();
        if (j.contains("overlay_masks")) {
            for (const auto& m : j.at("overlay_masks")) {
                sc.overlay_masks.push_back({m.at("x").get<int>(), m.at("y").get<int>(),
                                            m.at("w").get<int>(), m.at("h").get<int>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sidecar fields missing or mistyped: ") + e.what());
    }
    if (sc.calib.p_high == sc.calib.p_low) throw ParseError("sidecar has p_high == p_low");
    if (sc.calib.t_high_c < sc.calib.t_low_c) throw ParseError("sidecar has t_high_c < t_low_c");
    return sc;
}

std::string sidecar_to_text(const CalibrationSidecar& sc) {
    nlohmann::json j;
    j["t_high_c"] = sc.calib.t_high_c;
    j["t_low_c"] = sc.calib.t_low_c;
    j["p_high"] = sc.calib.p_high;
    j["p_low"] = sc.calib.p_low;
    j["overlay_masks"] = nlohmann::json::array();
    for (const MaskRegion& m : sc.overlay_masks) {
        j["overlay_masks"].push_back({{"x", m.x}, {"y", m.y}, {"w", m.w}, {"h", m.h}});
    }
    return j.dump(2) + "\n";
}

CalibrationSidecar load_sidecar_file(const std::string& path) {
    return sidecar_from_text(read_text_file(path));
}

void save_sidecar_file(const CalibrationSidecar& sc, const std::string& path) {
    write_text_file(path, sidecar_to_text(sc));
}

}  // namespace pvscan
