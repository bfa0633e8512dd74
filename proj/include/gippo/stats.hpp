#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gippo/errors.hpp"

namespace gippo {

// Strand-thickness histogram as exported by image analysis: up to 256 bins,
// strictly increasing thickness values (um), non-negative frequencies with a
// positive total.
struct HistogramBin {
    double thickness_um = 0.0;
    double frequency = 0.0;
};

struct ThicknessHistogram {
    std::vector<HistogramBin> bins;
};

void validate_histogram(const ThicknessHistogram& h);

enum class StdFormula {
    Standard,       // sqrt(sum f*(x-mean)^2 / sum f)
    TotalWeighted,  // sqrt(sum f*(x-mean)^2 / sum x*f): spread normalized by total
                    // thickness rather than total count; kept for auditing reports
                    // that use that convention
};

double hist_mean(const ThicknessHistogram& h);
double hist_std(const ThicknessHistogram& h, StdFormula formula = StdFormula::Standard);

struct Replicate {
    std::string name;
    double n = 0.0;     // total frequency
    double mean = 0.0;  // um
    double stddev = 0.0;
};

struct ReplicateSet {
    std::vector<Replicate> replicates;

    static ReplicateSet from_histograms(const std::vector<ThicknessHistogram>& hists,
                                        StdFormula formula = StdFormula::Standard);
};

// Frequency-weighted mean of means.
double combined_mean(const ReplicateSet& set);

// Pooled spread: sqrt(sum_j [n_j*s_j^2 + n_j*(mc - m_j)^2] / sum_j n_j).
// With the Standard formula this equals the population std of the pooled
// samples exactly.
double combined_std(const ReplicateSet& set);

// CSV with columns thickness_um,frequency; optional header row.
ThicknessHistogram parse_histogram_csv(std::string_view text, const std::string& source_name);
ThicknessHistogram load_histogram_csv(const std::string& path);

}  // namespace gippo
