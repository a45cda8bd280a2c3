#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace misose {

/// Plain `key = value` settings. Blank lines and lines starting with '#' or ';'
/// are ignored; keys may be written with or without a leading "--".
using Settings = std::map<std::string, std::string>;

Settings parse_settings(std::istream& in, const std::string& origin = "<stream>");
Settings load_settings(const std::string& path);

/// Parses "0,10,20" or the range form "start:step:stop" (inclusive stop).
std::vector<double> parse_grid(const std::string& text);

/// Parses "1,0.5,0" into numbers.
std::vector<double> parse_list(const std::string& text);

}  // namespace misose
