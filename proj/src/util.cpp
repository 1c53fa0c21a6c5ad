#include "topicmerge/util.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace topicmerge {

namespace {

bool parse_fixed_int(const std::string& s, size_t pos, size_t len, int64_t& out) {
  if (pos + len > s.size()) return false;
  int64_t v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

int64_t parse_iso8601(const std::string& s) {
  auto fail = [&]() -> int64_t {
    throw Error("invalid ISO-8601 timestamp: \"" + s + "\"");
  };
  int64_t y, mo, d, h = 0, mi = 0, se = 0;
  if (!parse_fixed_int(s, 0, 4, y)) return fail();
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return fail();
  if (!parse_fixed_int(s, 5, 2, mo) || !parse_fixed_int(s, 8, 2, d)) return fail();
  size_t rest = 10;
  if (s.size() > rest) {
    if (s[rest] != 'T' && s[rest] != ' ') return fail();
    if (s.size() < rest + 9 || s[rest + 3] != ':' || s[rest + 6] != ':') return fail();
    if (!parse_fixed_int(s, rest + 1, 2, h) || !parse_fixed_int(s, rest + 4, 2, mi) ||
        !parse_fixed_int(s, rest + 7, 2, se))
      return fail();
    rest += 9;
    if (s.size() == rest + 1 && s[rest] == 'Z')
      rest += 1;
  }
  if (s.size() != rest) return fail();
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) return fail();
  int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  int64_t ry;
  unsigned rm, rd;
  civil_from_days(days, ry, rm, rd);
  if (ry != y || rm != static_cast<unsigned>(mo) || rd != static_cast<unsigned>(d))
    return fail();  // e.g. February 30th
  return days * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_iso8601(int64_t t) {
  int64_t days = t / 86400;
  int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60), static_cast<long long>(rem % 60));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace topicmerge
