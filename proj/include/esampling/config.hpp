#pragma once

#include "esampling/engine.hpp"
#include "esampling/errors.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace esampling {

/// Configuration problem anchored to a source line (0 when not attributable).
class ConfigError : public Error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& message);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Line-oriented `key = value` file. `#` starts a comment; blank lines are
/// ignored; keys are dotted (`clock.alpha`).
struct ConfigFile {
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };
    std::string source;  // name used in messages
    std::map<std::string, Entry> entries;

    [[nodiscard]] static ConfigFile parse(std::istream& in, std::string source);
    [[nodiscard]] static ConfigFile load(const std::filesystem::path& path);

    [[nodiscard]] std::size_t line_of(const std::string& key) const;
};

/// Everything a `run` or `sweep` needs: the validated scenario plus output options.
struct RunConfig {
    Scenario scenario;
    std::filesystem::path output_dir = ".";
    std::size_t trace_stride = 1;
};

/// Every key the loader accepts.
[[nodiscard]] const std::map<std::string, std::string>& known_config_keys();

/// Builds and validates a RunConfig. Unknown keys, malformed values and
/// scenario validation failures raise ConfigError at the offending line.
/// Relative stimulus paths resolve against `base_dir`.
[[nodiscard]] RunConfig to_run_config(const ConfigFile& file,
                                      const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace esampling
