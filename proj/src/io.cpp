#include "picrec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace picrec {

namespace {

// Splits on '\n'; a trailing newline does not produce an empty final line.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

// Strict unsigned parse of an entire token.
bool parse_u64(std::string_view token, std::uint64_t& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

constexpr int kMaxPictureSide = 1 << 16; // keeps hostile inputs from absurd allocations

} // namespace

std::string encode_picture(const Picture& p) {
    const int n = p.n();
    std::string out;
    out.reserve(std::size_t(n) * (n + 1));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out.push_back(p.get(r, c) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

Picture decode_picture(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(0, "empty picture");
    const std::size_t n = lines[0].size();
    if (n == 0) throw ParseError(1, "empty row");
    if (n > std::size_t(kMaxPictureSide)) throw ParseError(1, "picture side too large");
    if (lines.size() > n)
        throw ParseError(int(n) + 1, "expected " + std::to_string(n) + " rows of " +
                                         std::to_string(n) + " columns");
    const int side = int(n);
    Picture p(side);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        if (lines[r].size() != n)
            throw ParseError(int(r) + 1, "row has " + std::to_string(lines[r].size()) +
                                             " columns, expected " + std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) {
            const char ch = lines[r][c];
            if (ch == '1')
                p.set(int(r), int(c), true);
            else if (ch != '0')
                throw ParseError(int(r) + 1, std::string("illegal cell character '") + ch + "'");
        }
    }
    if (lines.size() < n)
        throw ParseError(int(lines.size()) + 1, "expected " + std::to_string(n) + " rows, found " +
                                                    std::to_string(lines.size()));
    return p;
}

std::string encode_deck(const Deck& d) {
    std::string out = "DECK k=" + std::to_string(d.k) + " total=" + std::to_string(d.total()) + "\n";
    for (const DeckEntry& e : d.entries) {
        out += e.grid.encode();
        out.push_back(' ');
        out += std::to_string(e.count);
        out.push_back('\n');
    }
    return out;
}

Deck decode_deck(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(0, "missing deck header");

    std::string_view header = lines[0];
    const std::string_view k_tag = "DECK k=";
    if (header.substr(0, k_tag.size()) != k_tag) throw ParseError(1, "header must start with 'DECK k='");
    header.remove_prefix(k_tag.size());
    const std::size_t space = header.find(' ');
    if (space == std::string_view::npos) throw ParseError(1, "header missing total");
    std::uint64_t k_val = 0;
    if (!parse_u64(header.substr(0, space), k_val)) throw ParseError(1, "bad k value");
    std::string_view total_part = header.substr(space + 1);
    const std::string_view total_tag = "total=";
    if (total_part.substr(0, total_tag.size()) != total_tag) throw ParseError(1, "header missing 'total='");
    std::uint64_t total_val = 0;
    if (!parse_u64(total_part.substr(total_tag.size()), total_val)) throw ParseError(1, "bad total value");
    if (k_val < 1 || k_val > KGrid::kMaxSide)
        throw ParseError(1, "k=" + std::to_string(k_val) + " outside supported range 1.." +
                                std::to_string(KGrid::kMaxSide));

    Deck d;
    d.k = int(k_val);
    std::uint64_t sum = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const int line_no = int(i) + 1;
        std::string_view line = lines[i];
        const std::size_t sep = line.find(' ');
        if (sep == std::string_view::npos) throw ParseError(line_no, "expected '<cells> <count>'");
        std::string_view bits = line.substr(0, sep);
        KGrid g;
        try {
            g = KGrid::decode(d.k, bits);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        std::uint64_t count = 0;
        if (!parse_u64(line.substr(sep + 1), count) || count == 0)
            throw ParseError(line_no, "bad multiplicity");
        if (count > 0xffffffffull) throw ParseError(line_no, "multiplicity out of range");
        if (!d.entries.empty() && !(d.entries.back().grid < g))
            throw ParseError(line_no, "entries must be sorted ascending with no duplicates");
        d.entries.push_back({g, std::uint32_t(count)});
        sum += count;
    }
    if (sum != total_val)
        throw ParseError(0, "header total=" + std::to_string(total_val) +
                                " but entries sum to " + std::to_string(sum));
    return d;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("error reading " + path);
    return std::move(buf).str();
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw std::runtime_error("error writing " + path);
}

} // namespace picrec
