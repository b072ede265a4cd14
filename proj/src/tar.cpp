#include "glocal/tar.hpp"

#include <cstdio>
#include <cstring>

#include "glocal/common.hpp"

namespace glocal {
namespace tar {

namespace {

constexpr std::size_t kBlock = 512;

// header field offsets per the ustar layout
constexpr std::size_t kName = 0, kMode = 100, kUid = 108, kGid = 116, kSize = 124, kMtime = 136,
                      kChksum = 148, kTypeflag = 156, kMagic = 257, kVersion = 263;

void put_octal(char* field, std::size_t width, std::uint64_t value) {
    // width includes the trailing NUL
    char buf[24];
    const int digits = static_cast<int>(width) - 1;
    const int written =
        std::snprintf(buf, sizeof(buf), "%0*llo", digits, static_cast<unsigned long long>(value));
    if (written != digits)
        throw InputError("archive: field value does not fit in " + std::to_string(digits) +
                         " octal digits");
    std::memcpy(field, buf, width);
}

unsigned header_checksum(const char* h) {
    unsigned sum = 0;
    for (std::size_t i = 0; i < kBlock; ++i)
        sum += (i >= kChksum && i < kChksum + 8) ? ' ' : static_cast<unsigned char>(h[i]);
    return sum;
}

} // namespace

std::string write_archive(const std::vector<Entry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        if (e.name.empty() || e.name.size() > 100)
            throw InputError("archive entry name must be 1..100 bytes: '" + e.name + "'");
        char h[kBlock] = {};
        std::memcpy(h + kName, e.name.data(), e.name.size());
        put_octal(h + kMode, 8, 0644);
        put_octal(h + kUid, 8, 0);
        put_octal(h + kGid, 8, 0);
        put_octal(h + kSize, 12, e.data.size());
        put_octal(h + kMtime, 12, 0);
        h[kTypeflag] = '0';
        std::memcpy(h + kMagic, "ustar", 6);
        std::memcpy(h + kVersion, "00", 2);
        put_octal(h + kChksum, 7, header_checksum(h));
        h[kChksum + 7] = ' ';
        out.append(h, kBlock);
        out.append(e.data);
        if (e.data.size() % kBlock != 0)
            out.append(kBlock - e.data.size() % kBlock, '\0');
    }
    out.append(2 * kBlock, '\0');
    return out;
}

std::vector<Entry> read_archive(const std::string& bytes) {
    std::vector<Entry> entries;
    std::size_t pos = 0;
    while (pos + kBlock <= bytes.size()) {
        const char* h = bytes.data() + pos;
        bool zero = true;
        for (std::size_t i = 0; i < kBlock && zero; ++i)
            zero = h[i] == '\0';
        if (zero)
            return entries;
        if (std::memcmp(h + kMagic, "ustar", 5) != 0)
            throw InputError("archive: bad magic at offset " + std::to_string(pos));
        char size_field[13] = {};
        std::memcpy(size_field, h + kSize, 12);
        unsigned long long size = 0;
        if (std::sscanf(size_field, "%llo", &size) != 1)
            throw InputError("archive: unreadable size field");
        char chksum_field[9] = {};
        std::memcpy(chksum_field, h + kChksum, 8);
        unsigned long long stored = 0;
        if (std::sscanf(chksum_field, "%llo", &stored) != 1 || stored != header_checksum(h))
            throw InputError("archive: checksum mismatch");
        std::string name(h + kName, strnlen(h + kName, 100));
        const char type = h[kTypeflag];
        pos += kBlock;
        if (pos + size > bytes.size())
            throw InputError("archive: truncated entry '" + name + "'");
        if (type == '0' || type == '\0')
            entries.push_back({std::move(name), bytes.substr(pos, size)});
        pos += size;
        if (size % kBlock != 0)
            pos += kBlock - size % kBlock;
    }
    throw InputError("archive: missing end-of-archive blocks");
}

} // namespace tar
} // namespace glocal
