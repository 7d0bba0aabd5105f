#include "agpv/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace agpv {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value)
{
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "1" || value == "true" || value == "yes" || value == "on")
        return true;
    if (value == "0" || value == "false" || value == "no" || value == "off")
        return false;
    throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

} // namespace

void Config::validate() const
{
    if (t_dog <= 0)
        throw ConfigError("t_dog must be positive");
    if (!(th_f > 0.0))
        throw ConfigError("th_f must be positive");
    if (!(th_rec > 0.0))
        throw ConfigError("th_rec must be positive");
    if (!(th_bin_div > 0.0))
        throw ConfigError("th_bin_div must be positive");
    if (octaves < 1)
        throw ConfigError("octaves must be at least 1");
}

ExtractOptions Config::extract_options() const
{
    ExtractOptions o;
    o.t_dog = t_dog;
    o.octaves = octaves;
    return o;
}

MatchOptions Config::match_options() const
{
    MatchOptions o;
    o.th_f = th_f;
    o.th_rec = th_rec;
    o.agpv.th_bin_div = th_bin_div;
    return o;
}

BenchOptions Config::bench_options() const
{
    BenchOptions o;
    o.extract = extract_options();
    o.match = match_options();
    return o;
}

void set_config_value(Config& config, std::string_view key, std::string_view value)
{
    std::string k(key);
    for (auto& c : k)
        if (c == '-')
            c = '_';
    if (k == "t_dog")
        config.t_dog = parse_number<int>(key, value);
    else if (k == "th_f")
        config.th_f = parse_number<double>(key, value);
    else if (k == "th_rec")
        config.th_rec = parse_number<double>(key, value);
    else if (k == "th_bin_div")
        config.th_bin_div = parse_number<double>(key, value);
    else if (k == "octaves")
        config.octaves = parse_number<int>(key, value);
    else if (k == "seed")
        config.seed = parse_number<std::uint64_t>(key, value);
    else if (k == "known_orientation")
        config.known_orientation = parse_bool(key, value);
    else if (k == "dump_dir")
        config.dump_dir = std::string(value);
    else if (k == "dump_hist")
        config.dump_hist = std::string(value);
    else if (k == "dump_agpv")
        config.dump_agpv = std::string(value);
    else
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

Config parse_config(std::string_view text, Config base)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

Config load_config_file(const std::filesystem::path& path, Config base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

} // namespace agpv
