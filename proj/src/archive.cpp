#include "scalelab/archive.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "scalelab/error.hpp"

namespace scalelab {

namespace {

constexpr std::size_t kBlock = 512;

void put_octal(char* field, std::size_t width, unsigned long long value) {
    // width - 1 digits followed by NUL
    std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), value);
}

unsigned long long get_octal(std::string_view field) {
    unsigned long long v = 0;
    for (char c : field) {
        if (c == '\0' || c == ' ') {
            if (v) break;
            continue;
        }
        if (c < '0' || c > '7') throw Error(ErrorCode::ValidationError, "corrupt tar header");
        v = v * 8 + static_cast<unsigned>(c - '0');
    }
    return v;
}

unsigned checksum(const char* header) {
    unsigned sum = 0;
    for (std::size_t i = 0; i < kBlock; ++i) {
        const bool in_field = i >= 148 && i < 156;
        sum += in_field ? ' ' : static_cast<unsigned char>(header[i]);
    }
    return sum;
}

}  // namespace

std::string write_tar(const std::vector<ArchiveEntry>& entries) {
    std::string out;
    for (const ArchiveEntry& e : entries) {
        std::string name = e.name, prefix;
        if (name.size() > 100) {
            const auto slash = name.rfind('/', 155);
            if (slash == std::string::npos || name.size() - slash - 1 > 100) {
                throw Error(ErrorCode::ValidationError, "archive path too long: " + e.name);
            }
            prefix = name.substr(0, slash);
            name = name.substr(slash + 1);
        }
        char h[kBlock] = {};
        std::memcpy(h, name.data(), name.size());
        put_octal(h + 100, 8, 0644);
        put_octal(h + 108, 8, 0);
        put_octal(h + 116, 8, 0);
        put_octal(h + 124, 12, e.content.size());
        put_octal(h + 136, 12, 0);
        h[156] = '0';
        std::memcpy(h + 257, "ustar", 6);
        std::memcpy(h + 263, "00", 2);
        std::memcpy(h + 345, prefix.data(), prefix.size());
        std::snprintf(h + 148, 8, "%06o", checksum(h));
        h[155] = ' ';
        out.append(h, kBlock);
        out += e.content;
        out.append((kBlock - e.content.size() % kBlock) % kBlock, '\0');
    }
    out.append(2 * kBlock, '\0');
    return out;
}

std::vector<ArchiveEntry> read_tar(std::string_view archive) {
    std::vector<ArchiveEntry> out;
    std::size_t pos = 0;
    while (pos + kBlock <= archive.size()) {
        const char* h = archive.data() + pos;
        if (std::all_of(h, h + kBlock, [](char c) { return c == '\0'; })) return out;
        if (get_octal({h + 148, 8}) != checksum(h)) throw Error(ErrorCode::ValidationError, "tar checksum mismatch");
        const std::size_t size = get_octal({h + 124, 12});
        auto field = [&](std::size_t off, std::size_t len) {
            std::string_view f(h + off, len);
            return std::string(f.substr(0, f.find('\0')));
        };
        std::string name = field(0, 100);
        const std::string prefix = field(345, 155);
        if (!prefix.empty()) name = prefix + "/" + name;
        pos += kBlock;
        if (pos + size > archive.size()) throw Error(ErrorCode::ValidationError, "truncated tar entry " + name);
        const char type = h[156];
        if (type == '0' || type == '\0') out.push_back({name, std::string(archive.substr(pos, size))});
        pos += (size + kBlock - 1) / kBlock * kBlock;
    }
    throw Error(ErrorCode::ValidationError, "tar archive lacks its end marker");
}

}  // namespace scalelab
