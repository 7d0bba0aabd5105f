#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "agpv/bench.hpp"

namespace agpv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline. Defaults match the library option structs.
struct Config {
    int t_dog = 2;
    double th_f = 6.0;
    double th_rec = 8.0;
    double th_bin_div = 16.0;
    int octaves = kDefaultOctaves;
    std::uint64_t seed = 1;
    bool known_orientation = false;
    std::string dump_dir;
    std::string dump_hist;
    std::string dump_agpv;

    /// Throws ConfigError unless every threshold is positive and the octave
    /// count is at least one.
    void validate() const;

    ExtractOptions extract_options() const;
    MatchOptions match_options() const;
    BenchOptions bench_options() const;
};

/// Sets one field from its textual form. Keys use '_' or '-' interchangeably
/// (`th_bin_div`, `th-bin-div`). Unknown keys and unparsable values throw
/// ConfigError.
void set_config_value(Config& config, std::string_view key, std::string_view value);

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Entries override the corresponding fields of `base`.
Config parse_config(std::string_view text, Config base = {});

/// Reads a key=value file. Throws std::ios_base::failure if unreadable.
Config load_config_file(const std::filesystem::path& path, Config base = {});

} // namespace agpv
