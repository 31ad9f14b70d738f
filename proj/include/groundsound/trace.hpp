/**
 * @file trace.hpp
 * @brief Uniformly sampled pressure traces and their CSV / WAV writers.
 */

#ifndef GROUNDSOUND_TRACE_HPP
#define GROUNDSOUND_TRACE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace groundsound {

/// Sampling grid shared by traces that are compared or summed.
struct TraceWindow {
    double start_time = 0.0;
    double sample_rate = 0.0;
    std::size_t count = 0;

    double dt() const { return 1.0 / sample_rate; }
    double end_time() const { return start_time + double(count) / sample_rate; }
    double time(std::size_t i) const { return start_time + double(i) / sample_rate; }
};

struct PressureTrace {
    double sample_rate = 0.0;
    double start_time = 0.0;
    std::vector<double> samples; // Pa

    PressureTrace() = default;
    explicit PressureTrace(const TraceWindow& w) : sample_rate(w.sample_rate), start_time(w.start_time), samples(w.count)
    {
    }

    TraceWindow window() const { return {start_time, sample_rate, samples.size()}; }
    double dt() const { return 1.0 / sample_rate; }
    double time(std::size_t i) const { return start_time + double(i) / sample_rate; }

    /// Time-integrated squared pressure, Pa^2 s.
    double energy() const
    {
        double s = 0.0;
        for (double p : samples)
            s += p * p;
        return s / sample_rate;
    }

    double peak() const
    {
        double m = 0.0;
        for (double p : samples)
            m = std::max(m, std::abs(p));
        return m;
    }

    bool aligned_with(const PressureTrace& o) const
    {
        return samples.size() == o.samples.size() && sample_rate == o.sample_rate
            && std::abs(start_time - o.start_time) <= 1e-9 / sample_rate;
    }

    PressureTrace& operator+=(const PressureTrace& o)
    {
        if (!aligned_with(o))
            throw std::invalid_argument("PressureTrace: cannot add traces on different sampling grids");
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] += o.samples[i];
        return *this;
    }

    PressureTrace& operator*=(double s)
    {
        for (auto& p : samples)
            p *= s;
        return *this;
    }

    /// Linear interpolation at an arbitrary time; zero outside the trace.
    double at(double t) const
    {
        const double x = (t - start_time) * sample_rate;
        if (!(x >= 0.0) || samples.empty())
            return 0.0;
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= samples.size())
            return i + 1 == samples.size() && x == double(i) ? samples[i] : 0.0;
        const double f = x - double(i);
        return samples[i] * (1.0 - f) + samples[i + 1] * f;
    }
};

/// Resample onto another grid by linear interpolation.
inline PressureTrace resample(const PressureTrace& in, const TraceWindow& w)
{
    PressureTrace out(w);
    for (std::size_t i = 0; i < w.count; ++i)
        out.samples[i] = in.at(w.time(i));
    return out;
}

/// Window covering `in` at a new sample rate.
inline TraceWindow covering_window(const PressureTrace& in, double sample_rate)
{
    const double span = double(in.samples.size()) / in.sample_rate;
    return {in.start_time, sample_rate, static_cast<std::size_t>(std::floor(span * sample_rate)) + 1};
}

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV with a header row; each column is one named series.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << format_number(columns[c][r]);
        out << '\n';
    }
}

/// Columns (t, p1, p2, ...) for traces on a common grid.
inline void write_traces_csv(const std::string& path, const std::vector<std::string>& names,
                             const std::vector<PressureTrace>& traces)
{
    if (traces.empty())
        throw std::invalid_argument("write_traces_csv: no traces");
    for (const auto& t : traces)
        if (!t.aligned_with(traces.front()))
            throw std::invalid_argument("write_traces_csv: traces are not aligned");
    std::vector<std::string> header{"t"};
    header.insert(header.end(), names.begin(), names.end());
    std::vector<std::vector<double>> cols(1 + traces.size());
    for (std::size_t i = 0; i < traces.front().samples.size(); ++i)
        cols[0].push_back(traces.front().time(i));
    for (std::size_t k = 0; k < traces.size(); ++k)
        cols[k + 1] = traces[k].samples;
    write_csv(path, header, cols);
}

namespace detail {

inline void put_u32(std::ofstream& o, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    o.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u16(std::ofstream& o, std::uint16_t v)
{
    const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    o.write(reinterpret_cast<const char*>(b), 2);
}

inline void put_f32(std::ofstream& o, float f)
{
    std::uint32_t u;
    static_assert(sizeof u == sizeof f);
    std::memcpy(&u, &f, sizeof u);
    put_u32(o, u);
}

} // namespace detail

/**
 * 32-bit float mono WAV, peak-normalized to `peak` (full scale 1.0 by default).
 * The factor mapping file samples back to pascals goes into `<path>.json`.
 * Returns that factor (Pa per unit sample); an all-zero trace is written as is.
 */
inline double write_wav(const std::string& path, const PressureTrace& trace, double peak = 1.0)
{
    const double p = trace.peak();
    const double gain = p > 0.0 ? peak / p : 1.0;
    const auto n = static_cast<std::uint32_t>(trace.samples.size());
    const auto rate = static_cast<std::uint32_t>(std::lround(trace.sample_rate));

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    const std::uint32_t data_bytes = 4 * n;
    out.write("RIFF", 4);
    detail::put_u32(out, 4 + (8 + 18) + (8 + 4) + (8 + data_bytes));
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    detail::put_u32(out, 18);
    detail::put_u16(out, 3); // IEEE float
    detail::put_u16(out, 1);
    detail::put_u32(out, rate);
    detail::put_u32(out, rate * 4);
    detail::put_u16(out, 4);
    detail::put_u16(out, 32);
    detail::put_u16(out, 0);
    out.write("fact", 4);
    detail::put_u32(out, 4);
    detail::put_u32(out, n);
    out.write("data", 4);
    detail::put_u32(out, data_bytes);
    for (double s : trace.samples)
        detail::put_f32(out, static_cast<float>(s * gain));

    nlohmann::ordered_json meta;
    meta["sample_rate"] = trace.sample_rate;
    meta["start_time"] = trace.start_time;
    meta["samples"] = n;
    meta["pascal_per_unit"] = 1.0 / gain;
    meta["peak_pascal"] = p;
    std::ofstream side(path + ".json");
    side << meta.dump(2) << '\n';
    return 1.0 / gain;
}

/// Read back a file written by write_wav (samples in file units).
inline PressureTrace read_wav(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto u32 = [&](std::size_t at) {
        return std::uint32_t(bytes.at(at)) | std::uint32_t(bytes.at(at + 1)) << 8 | std::uint32_t(bytes.at(at + 2)) << 16
             | std::uint32_t(bytes.at(at + 3)) << 24;
    };
    if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF")
        throw ConfigError("'" + path + "' is not a RIFF file");
    PressureTrace t;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
        const std::uint32_t len = u32(pos + 4);
        if (id == "fmt ")
            t.sample_rate = u32(pos + 12);
        if (id == "data") {
            for (std::uint32_t k = 0; k + 4 <= len; k += 4) {
                const std::uint32_t u = u32(pos + 8 + k);
                float f;
                std::memcpy(&f, &u, sizeof f);
                t.samples.push_back(f);
            }
        }
        pos += 8 + len + (len & 1u);
    }
    return t;
}

} // namespace groundsound

#endif
