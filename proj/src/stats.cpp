#include "gippo/stats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gippo {

void validate_histogram(const ThicknessHistogram& h) {
    if (h.bins.empty()) throw FormatError("histogram: no bins");
    if (h.bins.size() > 256) throw FormatError("histogram: more than 256 bins");
    double total = 0.0;
    for (size_t i = 0; i < h.bins.size(); ++i) {
        const HistogramBin& b = h.bins[i];
        if (!std::isfinite(b.thickness_um) || !std::isfinite(b.frequency))
            throw FormatError("histogram: non-finite bin " + std::to_string(i));
        if (b.frequency < 0.0)
            throw FormatError("histogram: negative frequency in bin " + std::to_string(i));
        if (i > 0 && !(b.thickness_um > h.bins[i - 1].thickness_um))
            throw FormatError("histogram: thickness values must be strictly increasing (bin " +
                              std::to_string(i) + ")");
        total += b.frequency;
    }
    if (!(total > 0.0)) throw FormatError("histogram: total frequency must be positive");
}

double hist_mean(const ThicknessHistogram& h) {
    validate_histogram(h);
    double sum_f = 0.0, sum_xf = 0.0;
    for (const HistogramBin& b : h.bins) {
        sum_f += b.frequency;
        sum_xf += b.thickness_um * b.frequency;
    }
    return sum_xf / sum_f;
}

double hist_std(const ThicknessHistogram& h, StdFormula formula) {
    const double mean = hist_mean(h);
    double sum_f = 0.0, sum_xf = 0.0, sum_sq = 0.0;
    for (const HistogramBin& b : h.bins) {
        sum_f += b.frequency;
        sum_xf += b.thickness_um * b.frequency;
        const double d = b.thickness_um - mean;
        sum_sq += b.frequency * d * d;
    }
    const double denom = (formula == StdFormula::Standard) ? sum_f : sum_xf;
    if (!(denom > 0.0))
        throw ParamError("hist_std: literal denominator sum(x*f) is not positive");
    return std::sqrt(sum_sq / denom);
}

ReplicateSet ReplicateSet::from_histograms(const std::vector<ThicknessHistogram>& hists,
                                           StdFormula formula) {
    if (hists.empty()) throw ParamError("replicates: no histograms");
    ReplicateSet set;
    for (size_t i = 0; i < hists.size(); ++i) {
        Replicate r;
        r.name = "replicate_" + std::to_string(i);
        double n = 0.0;
        for (const HistogramBin& b : hists[i].bins) n += b.frequency;
        r.n = n;
        r.mean = hist_mean(hists[i]);
        r.stddev = hist_std(hists[i], formula);
        set.replicates.push_back(r);
    }
    return set;
}

double combined_mean(const ReplicateSet& set) {
    if (set.replicates.empty()) throw ParamError("combined_mean: empty replicate set");
    double n = 0.0, sum = 0.0;
    for (const Replicate& r : set.replicates) {
        if (!(r.n > 0.0)) throw ParamError("combined_mean: replicate with non-positive n");
        n += r.n;
        sum += r.n * r.mean;
    }
    return sum / n;
}

double combined_std(const ReplicateSet& set) {
    const double mc = combined_mean(set);
    double n = 0.0, sum = 0.0;
    for (const Replicate& r : set.replicates) {
        const double d = mc - r.mean;
        sum += r.n * r.stddev * r.stddev + r.n * d * d;
        n += r.n;
    }
    return std::sqrt(sum / n);
}

namespace {

bool parse_double_token(std::string_view tok, double& out) {
    size_t b = 0, e = tok.size();
    while (b < e && (tok[b] == ' ' || tok[b] == '\t')) ++b;
    while (e > b && (tok[e - 1] == ' ' || tok[e - 1] == '\t' || tok[e - 1] == '\r')) --e;
    if (b == e) return false;
    const auto res = std::from_chars(tok.data() + b, tok.data() + e, out);
    return res.ec == std::errc() && res.ptr == tok.data() + e;
}

}  // namespace

ThicknessHistogram parse_histogram_csv(std::string_view text, const std::string& source_name) {
    ThicknessHistogram h;
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw FormatError(source_name + " line " + std::to_string(line_no) +
                              ": expected two comma-separated columns");
        double x = 0.0, f = 0.0;
        const bool ok =
            parse_double_token(line.substr(0, comma), x) && parse_double_token(line.substr(comma + 1), f);
        if (!ok) {
            if (line_no == 1) continue;  // header row
            throw FormatError(source_name + " line " + std::to_string(line_no) +
                              ": non-numeric value");
        }
        h.bins.push_back({x, f});
    }
    try {
        validate_histogram(h);
    } catch (const FormatError& e) {
        throw FormatError(source_name + ": " + e.what());
    }
    return h;
}

ThicknessHistogram load_histogram_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open histogram file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_histogram_csv(ss.str(), path);
}

}  // namespace gippo
