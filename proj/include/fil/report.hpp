#pragma once

// Run configuration and report plumbing: every output embeds the config hash,
// identical configs produce byte-identical JSON (fixed key order, no clocks).

#include "fil/rv_basis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fil {

inline constexpr const char* kReportSchema = "fil-report-v1";

struct RunConfig {
    std::string command;
    long n_max = 12;
    long trunc = 32; // operator truncation N
    std::string weight = "s=5";
    std::string eps = "zero";
    std::string delta; // empty: same as eps
    std::string grid = "-3:3:0.05";
    std::string function = "gauss:1";
    std::string precision = "double"; // double | extended
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    QuadParams quad;

    bool extended() const { return precision == "extended"; }
    std::string to_json() const;
    static RunConfig from_json_file(const std::string& path);
    std::string hash() const; // FNV-1a over the canonical dump, hex
};

std::uint64_t fnv1a64(const std::string& s);

// "a:b:step" -> inclusive uniform grid
std::vector<double> parse_grid(const std::string& spec);

void write_text_file(const std::string& path, const std::string& content);

} // namespace fil
