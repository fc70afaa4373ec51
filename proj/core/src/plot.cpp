#include "cpilab/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>

#include <zlib.h>

#include "cpilab/error.hpp"

namespace cpilab {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 50.0;

const std::array<const char*, 6> kColours = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#555555"};

std::string num(double v, int precision = 6)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// 1-2-5 tick step giving roughly `target` intervals.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double m = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return m * mag;
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void axes(std::string& svg, const Frame& f, const std::string& title, const std::string& x_label,
          const std::string& y_label)
{
    svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
           "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    const double xs = nice_step(f.x1 - f.x0, 8);
    for (double t = std::ceil(f.x0 / xs) * xs; t <= f.x1 + 1e-9 * xs; t += xs) {
        const double p = f.px(t);
        svg += "<line x1=\"" + num(p) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(p) + "\" y2=\"" +
               num(kHeight - kBottom + 5) + "\" stroke=\"#000\"/>";
        svg += "<text x=\"" + num(p) + "\" y=\"" + num(kHeight - kBottom + 18) +
               "\" text-anchor=\"middle\">" + num(std::abs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
    }
    const double ys = nice_step(f.y1 - f.y0, 6);
    for (double t = std::ceil(f.y0 / ys) * ys; t <= f.y1 + 1e-9 * ys; t += ys) {
        const double p = f.py(t);
        svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(p) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(p) +
               "\" stroke=\"#000\"/>";
        svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(p + 4) + "\" text-anchor=\"end\">" +
               num(std::abs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
    }
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) +
           "</text>\n";
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
    svg += "<text transform=\"translate(18," + num(kHeight / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           escape(y_label) + "</text>\n";
}

std::string header()
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
}

void put_u32(std::string& out, std::uint32_t v)
{
    for (int s = 24; s >= 0; s -= 8) out += static_cast<char>((v >> s) & 0xffu);
}

void png_chunk(std::string& out, const char* type, const std::string& data)
{
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::string body = std::string(type, 4) + data;
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

std::string grayscale_png(const std::vector<std::uint8_t>& pixels, std::uint32_t width, std::uint32_t height)
{
    std::string raw;
    raw.reserve((width + 1) * height);
    for (std::uint32_t r = 0; r < height; ++r) {
        raw += '\0';
        raw.append(reinterpret_cast<const char*>(pixels.data()) + static_cast<std::size_t>(r) * width, width);
    }
    uLongf size = compressBound(static_cast<uLong>(raw.size()));
    std::string packed(size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &size, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw Error("PNG compression failed");
    }
    packed.resize(size);

    std::string png = "\x89PNG\r\n\x1a\n";
    std::string ihdr;
    put_u32(ihdr, width);
    put_u32(ihdr, height);
    ihdr += std::string("\x08\x00\x00\x00\x00", 5); // 8-bit grayscale
    png_chunk(png, "IHDR", ihdr);
    png_chunk(png, "IDAT", packed);
    png_chunk(png, "IEND", "");
    return png;
}

std::string base64(const std::string& in)
{
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((in.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < in.size(); i += 3) {
        const auto n = (static_cast<unsigned char>(in[i]) << 16) | (static_cast<unsigned char>(in[i + 1]) << 8) |
                       static_cast<unsigned char>(in[i + 2]);
        out += table[(n >> 18) & 63];
        out += table[(n >> 12) & 63];
        out += table[(n >> 6) & 63];
        out += table[n & 63];
    }
    if (i < in.size()) {
        unsigned n = static_cast<unsigned char>(in[i]) << 16;
        if (i + 1 < in.size()) n |= static_cast<unsigned char>(in[i + 1]) << 8;
        out += table[(n >> 18) & 63];
        out += table[(n >> 12) & 63];
        out += i + 1 < in.size() ? table[(n >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

} // namespace

std::string svg_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label)
{
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) {
            throw ContractError("plot series '" + s.label + "' has mismatched lengths");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!(x1 > x0)) {
        throw ContractError("nothing to plot");
    }
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    const Frame f{x0, x1, y0 - pad, y1 + pad};

    std::string svg = header();
    axes(svg, f, title, x_label, y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kColours[k % kColours.size()];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += colour;
        svg += "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg += num(f.px(s.x[i]), 7) + "," + num(f.py(s.y[i]), 7) + " ";
        }
        svg += "\"/>\n";
        const double ly = kTop + 16.0 + 16.0 * static_cast<double>(k);
        svg += "<line x1=\"" + num(kWidth - kRight - 150) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(kWidth - kRight - 130) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + colour + "\"/>";
        svg += "<text x=\"" + num(kWidth - kRight - 125) + "\" y=\"" + num(ly) + "\">" + escape(s.label) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string svg_spectrogram(const Spectrogram& spec, const std::string& title)
{
    const std::size_t nx = spec.x_um.size();
    const std::size_t nl = spec.lambda_nm.size();
    if (nx < 2 || nl < 2 || spec.intensity.size() != nx * nl) {
        throw ContractError("spectrogram too small to plot");
    }
    const double peak = *std::max_element(spec.intensity.begin(), spec.intensity.end());
    // Image rows run from long wavelength (top) to short; columns follow x.
    std::vector<std::uint8_t> pixels(nx * nl);
    for (std::size_t r = 0; r < nl; ++r) {
        const std::size_t il = nl - 1 - r;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double v = peak > 0.0 ? spec.at(ix, il) / peak : 0.0;
            pixels[r * nx + ix] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
        }
    }
    const std::string png = grayscale_png(pixels, static_cast<std::uint32_t>(nx), static_cast<std::uint32_t>(nl));

    const Frame f{spec.x_um.front(), spec.x_um.back(), spec.lambda_nm.front(), spec.lambda_nm.back()};
    std::string svg = header();
    svg += "<image x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
           "\" height=\"" + num(kHeight - kTop - kBottom) +
           "\" preserveAspectRatio=\"none\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64," +
           base64(png) + "\"/>\n";
    axes(svg, f, title, "path delay x (um)", "SFG wavelength (nm)");
    svg += "</svg>\n";
    return svg;
}

} // namespace cpilab
