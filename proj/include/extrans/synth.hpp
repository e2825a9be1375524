#pragma once

// Synthetic manpage-style documents for scaling experiments. The large
// corpus is the small one plus generated documents over a filler
// vocabulary, grown until the byte ratio reaches the requested target.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "extrans/error.hpp"
#include "extrans/text.hpp"

namespace extrans::synth {

namespace fs = std::filesystem;

struct Options {
    double ratio = 13.6;
    unsigned seed = 1999;
};

struct Summary {
    std::size_t smallDocs = 0;
    std::size_t smallBytes = 0;
    std::size_t generatedDocs = 0;
    std::size_t largeBytes = 0;

    double ratio() const { return smallBytes ? static_cast<double>(largeBytes) / static_cast<double>(smallBytes) : 0.0; }
};

namespace detail {

inline constexpr std::array<std::string_view, 28> kNouns = {"archive", "partition", "device", "packet", "socket",
    "printer", "terminal", "session", "log", "image", "font", "table", "job", "task", "host", "address", "port",
    "request", "response", "volume", "record", "buffer", "page", "string", "module", "package", "account",
    "password"};

// regular verbs whose inflections round-trip through the lemmatizer
inline constexpr std::array<std::string_view, 24> kVerbs = {"format", "compress", "encrypt", "decrypt",
    "schedule", "monitor", "receive", "fetch", "combine", "truncate", "parse", "render", "register", "lock",
    "unlock", "load", "save", "open", "close", "edit", "convert", "check", "verify", "install"};

// shared with the fixture vocabulary so that some symbols overlap
inline constexpr std::array<std::string_view, 4> kCommonVerbs = {"copy", "create", "remove", "list"};
inline constexpr std::array<std::string_view, 4> kCommonNouns = {"file", "directory", "column", "line"};

inline constexpr std::array<std::string_view, 11> kAdjectives = {"local", "remote", "single", "separate",
    "specific", "old", "large", "small", "new", "current", "multiple"};

inline bool endsWith(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline std::string thirdPerson(std::string_view verb)
{
    std::string v(verb);
    if (endsWith(v, "s") || endsWith(v, "x") || endsWith(v, "z") || endsWith(v, "sh") || endsWith(v, "ch"))
        return v + "es";
    if (endsWith(v, "y") && v.size() > 1 && std::string_view("aeiou").find(v[v.size() - 2]) == std::string_view::npos)
        return v.substr(0, v.size() - 1) + "ies";
    return v + "s";
}

inline std::string pastParticiple(std::string_view verb)
{
    std::string v(verb);
    if (endsWith(v, "e"))
        return v + "d";
    if (endsWith(v, "y") && v.size() > 1 && std::string_view("aeiou").find(v[v.size() - 2]) == std::string_view::npos)
        return v.substr(0, v.size() - 1) + "ied";
    return v + "ed";
}

inline std::string plural(std::string_view noun)
{
    return thirdPerson(noun);
}

inline std::string capitalized(std::string s)
{
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z')
        s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

template <typename Seq>
std::string pick(const Seq& seq, std::mt19937& rng)
{
    std::uniform_int_distribution<std::size_t> d(0, seq.size() - 1);
    return std::string(seq[d(rng)]);
}

} // namespace detail

// Pronounceable command name from consonant-vowel syllables.
inline std::string commandName(std::mt19937& rng)
{
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    std::uniform_int_distribution<int> syllables(2, 3);
    std::string name;
    const int n = syllables(rng);
    for (int i = 0; i < n; ++i) {
        name += consonants[std::uniform_int_distribution<std::size_t>(0, consonants.size() - 1)(rng)];
        name += vowels[std::uniform_int_distribution<std::size_t>(0, vowels.size() - 1)(rng)];
    }
    name += consonants[std::uniform_int_distribution<std::size_t>(0, consonants.size() - 1)(rng)];
    return name;
}

inline std::string generateSentence(const std::string& cmd, std::mt19937& rng)
{
    using namespace detail;
    std::uniform_int_distribution<int> templ(0, 8);
    std::uniform_int_distribution<int> common(0, 9);
    auto verb = [&] { return common(rng) == 0 ? pick(kCommonVerbs, rng) : pick(kVerbs, rng); };
    auto noun = [&] { return common(rng) == 0 ? pick(kCommonNouns, rng) : pick(kNouns, rng); };
    switch (templ(rng)) {
    case 0: return cmd + " " + thirdPerson(verb()) + " " + plural(noun()) + ".";
    case 1:
        return cmd + " " + thirdPerson(verb()) + " the " + pick(kAdjectives, rng) + " " + plural(noun()) +
            " with the " + noun() + " option.";
    case 2:
        return "The " + cmd + " command " + thirdPerson(verb()) + " the " + plural(noun()) + " of a " +
            noun() + ".";
    case 3:
        return capitalized(plural(noun())) + " are " + pastParticiple(pick(kVerbs, rng)) + " by " + cmd +
            " with the " + pick(kAdjectives, rng) + " option.";
    case 4: return cmd + " does not " + verb() + " " + plural(noun()) + " by default.";
    case 5: {
        std::string v1 = thirdPerson(pick(kVerbs, rng));
        return cmd + " " + v1 + " a " + noun() + " and " + thirdPerson(pick(kVerbs, rng)) + " it.";
    }
    case 6: return cmd + " reads the " + plural(noun()) + " from the standard input.";
    case 7:
        return "A " + noun() + " is " + pastParticiple(pick(kVerbs, rng)) + " by " + cmd + " in the " +
            pick(kAdjectives, rng) + " " + noun() + ".";
    default:
        return cmd + " " + thirdPerson(pick(kVerbs, rng)) + " each " + noun() + " and writes the " +
            noun() + " to the standard output.";
    }
}

inline std::string generateDocument(const std::string& cmd, std::mt19937& rng)
{
    std::uniform_int_distribution<int> lines(7, 12);
    std::string body = cmd + " is a utility.\n";
    const int n = lines(rng);
    for (int i = 0; i < n; ++i)
        body += generateSentence(cmd, rng) + "\n";
    return body;
}

// Copies every *.txt of `smallCorpus` into `outDir`, then adds generated
// documents until bytes(out) / bytes(small) reaches options.ratio.
inline Summary synthesizeLargeCorpus(const fs::path& smallCorpus, const fs::path& outDir, const Options& options = {})
{
    Summary sum;
    std::error_code ec;
    fs::create_directories(outDir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + outDir.string() + ": " + ec.message());

    std::set<std::string> taken;
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(smallCorpus))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            inputs.push_back(entry.path());
    std::sort(inputs.begin(), inputs.end());
    for (const auto& p : inputs) {
        const std::string body = text::readFile(p);
        text::writeFile(outDir / p.filename(), body);
        taken.insert(p.stem().string());
        sum.smallBytes += body.size();
        ++sum.smallDocs;
    }
    sum.largeBytes = sum.smallBytes;

    std::mt19937 rng(options.seed);
    const auto target = static_cast<std::size_t>(options.ratio * static_cast<double>(sum.smallBytes));
    while (sum.largeBytes < target) {
        std::string name = commandName(rng);
        if (!taken.insert(name).second)
            continue;
        std::string body = generateDocument(name, rng);
        if (sum.largeBytes + body.size() / 2 > target)
            break;
        text::writeFile(outDir / (name + ".txt"), body);
        sum.largeBytes += body.size();
        ++sum.generatedDocs;
    }
    return sum;
}

} // namespace extrans::synth
