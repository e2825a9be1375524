#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "extrans/error.hpp"

namespace extrans::text {

inline bool isSpace(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Letters, digits and hyphens; bytes of multi-byte UTF-8 sequences count as letters.
inline bool isWordChar(char c)
{
    const auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == '-' ||
        u >= 0x80;
}

inline bool isPunctChar(char c)
{
    return !isSpace(c) && !isWordChar(c);
}

inline std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Splits into at most `maxFields` fields; the last one keeps any remaining separators.
inline std::vector<std::string_view> splitN(std::string_view s, char sep, std::size_t maxFields)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (out.size() + 1 < maxFields) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos)
            break;
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    out.push_back(s.substr(start));
    return out;
}

// LF-separated lines; a trailing CR is stripped and a final empty line dropped.
inline std::vector<std::string_view> splitLines(std::string_view s)
{
    std::vector<std::string_view> out;
    if (s.empty())
        return out;
    for (std::string_view line : split(s, '\n')) {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
    }
    if (!out.empty() && out.back().empty() && s.back() == '\n')
        out.pop_back();
    return out;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && isSpace(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && isSpace(s.back()))
        s.remove_suffix(1);
    return s;
}

inline std::string readFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::IoError, "read failed: " + path.string());
    return buf.str();
}

inline void writeFile(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

} // namespace extrans::text
