#include "spyfall/text.hpp"

#include "spyfall/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace spyfall::text {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

} // namespace

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

int replace_all(std::string& s, std::string_view from, std::string_view to) {
    if (from.empty()) return 0;
    int n = 0;
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
        ++n;
    }
    return n;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    if (needle.size() > haystack.size()) return false;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return lower(a) == lower(b); });
    return it != haystack.end();
}

bool contains_phrase_ci(std::string_view haystack, std::string_view phrase) {
    if (phrase.empty() || phrase.size() > haystack.size()) return false;
    for (size_t i = 0; i + phrase.size() <= haystack.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < phrase.size(); ++j) {
            if (lower(haystack[i + j]) != lower(phrase[j])) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        const bool left_ok = (i == 0) || !is_alnum(haystack[i - 1]);
        const size_t end = i + phrase.size();
        const bool right_ok = (end == haystack.size()) || !is_alnum(haystack[end]);
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x00000100000001b3ull;
    }
    return h;
}

std::string to_hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) throw LoadError("read failed: " + path.string());
    return ss.str();
}

std::string format_iso8601_us(std::int64_t micros) {
    std::int64_t secs = micros / 1000000;
    std::int64_t frac = micros % 1000000;
    if (frac < 0) {
        frac += 1000000;
        secs -= 1;
    }
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<long long>(frac));
    return buf;
}

std::int64_t parse_iso8601_us(const std::string& s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char frac_buf[16] = {0};
    int n = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d.%15[0-9]", &y, &mo, &d, &h, &mi, &se, frac_buf);
    if (n < 6) throw LoadError("bad ISO-8601 timestamp: " + s);
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = se;
    std::time_t secs = timegm(&tm);
    std::int64_t frac = 0;
    if (n == 7) {
        std::string f(frac_buf);
        f.resize(6, '0'); // pad/truncate to microseconds
        frac = std::stoll(f);
    }
    return static_cast<std::int64_t>(secs) * 1000000 + frac;
}

std::int64_t parse_timestamp(const std::string& s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    long long us = 0;
    int n = std::sscanf(s.c_str(), "datetime.datetime(%d, %d, %d, %d, %d, %d, %lld)",
                        &y, &mo, &d, &h, &mi, &se, &us);
    if (n >= 6) {
        std::tm tm{};
        tm.tm_year = y - 1900;
        tm.tm_mon = mo - 1;
        tm.tm_mday = d;
        tm.tm_hour = h;
        tm.tm_min = mi;
        tm.tm_sec = se;
        return static_cast<std::int64_t>(timegm(&tm)) * 1000000 + (n == 7 ? us : 0);
    }
    return parse_iso8601_us(s);
}

} // namespace spyfall::text
