#include "misose/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace misose {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number '" + token + "' in " + context);
  }
  if (used != token.size())
    throw std::invalid_argument("not a number '" + token + "' in " + context);
  return v;
}

}  // namespace

Settings parse_settings(std::istream& in, const std::string& origin) {
  Settings settings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": expected key=value, got '" + body + "'");
    std::string key = trim(body.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": empty key");
    settings[key] = trim(body.substr(eq + 1));
  }
  return settings;
}

Settings load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse_settings(in, path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(to_double(token, "'" + text + "'"));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string body = trim(text);
  if (body.find(':') == std::string::npos) return parse_list(body);

  std::vector<std::string> parts;
  std::stringstream ss(body);
  std::string token;
  while (std::getline(ss, token, ':')) parts.push_back(trim(token));
  if (parts.size() != 3)
    throw std::invalid_argument("range grid must be start:step:stop, got '" + text + "'");
  const double start = to_double(parts[0], "'" + text + "'");
  const double step = to_double(parts[1], "'" + text + "'");
  const double stop = to_double(parts[2], "'" + text + "'");
  if (!(step > 0.0) || stop < start)
    throw std::invalid_argument("range grid needs step > 0 and stop >= start: '" + text + "'");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) out.push_back(start + step * static_cast<double>(i));
  return out;
}

}  // namespace misose
