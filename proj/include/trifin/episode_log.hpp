#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "trifin/fsm.hpp"

namespace trifin {

/// JSON-Lines episode log: a header record carrying the config hash and
/// seed, one record per step, and a trailing summary record. Writing is
/// canonical -- parsing a log and writing it back is byte-identical.
void write_episode_log(const EpisodeLog& log, std::ostream& out);
void write_episode_log(const EpisodeLog& log, const std::filesystem::path& path);

std::string episode_log_to_string(const EpisodeLog& log);

/// Throws ConfigError on malformed input.
EpisodeLog read_episode_log(std::istream& in);
EpisodeLog read_episode_log(const std::filesystem::path& path);

}  // namespace trifin
