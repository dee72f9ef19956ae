#pragma once

#include <cstdio>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cannonball/bigint.hpp"
#include "cannonball/errors.hpp"

namespace cannonball {

// Binary sequence cache: magic "PYRSEQ1\n", a 64-bit little-endian record
// count, then (n, a_n) as two 64-bit little-endian unsigned fields per
// record.  Valid only while a_n < 2^64, guaranteed for n < 2^42; writing a
// record outside that range is refused.

inline constexpr char kCacheMagic[8] = {'P', 'Y', 'R', 'S', 'E', 'Q', '1', '\n'};
inline constexpr u64 kCacheMaxIndex = u64(1) << 42;

struct CacheRecord {
    u64 n;
    u64 a;
};

namespace detail {

inline void put_u64_le(unsigned char* p, u64 v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline u64 get_u64_le(const unsigned char* p) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(p[i]) << (8 * i);
    return v;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

inline void cache_write(const std::string& path, std::span<const CacheRecord> records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].n >= kCacheMaxIndex) {
            throw FormatError("cache_write: record n=" + std::to_string(records[i].n) +
                                  " is outside the representable range (n < 2^42)",
                              16 + 16 * static_cast<u64>(i));
        }
    }
    detail::FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw ResourceError("cache_write: cannot open " + path);

    unsigned char buf[16];
    std::memcpy(buf, kCacheMagic, 8);
    detail::put_u64_le(buf + 8, records.size());
    if (std::fwrite(buf, 1, 16, f.get()) != 16)
        throw ResourceError("cache_write: short write to " + path);
    for (const auto& rec : records) {
        detail::put_u64_le(buf, rec.n);
        detail::put_u64_le(buf + 8, rec.a);
        if (std::fwrite(buf, 1, 16, f.get()) != 16)
            throw ResourceError("cache_write: short write to " + path);
    }
}

inline std::vector<CacheRecord> cache_read(const std::string& path) {
    detail::FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw ResourceError("cache_read: cannot open " + path);

    std::fseek(f.get(), 0, SEEK_END);
    const long fsize = std::ftell(f.get());
    std::rewind(f.get());
    const u64 size = fsize < 0 ? 0 : static_cast<u64>(fsize);

    unsigned char buf[16];
    if (std::fread(buf, 1, 8, f.get()) != 8)
        throw FormatError("cache_read: truncated header in " + path, 0);
    if (std::memcmp(buf, kCacheMagic, 8) != 0)
        throw FormatError("cache_read: bad magic in " + path, 0);
    if (std::fread(buf, 1, 8, f.get()) != 8)
        throw FormatError("cache_read: truncated record count in " + path, 8);
    const u64 count = detail::get_u64_le(buf);

    // Validate the declared count against the actual file size before any
    // allocation; report the offset where the data runs out.
    const u64 available = size < 16 ? 0 : (size - 16) / 16;
    if (count > available)
        throw FormatError("cache_read: count " + std::to_string(count) + " exceeds records in " +
                              path,
                          16 + 16 * available);

    std::vector<CacheRecord> records;
    records.reserve(static_cast<std::size_t>(count));
    for (u64 i = 0; i < count; ++i) {
        const u64 offset = 16 + 16 * i;
        if (std::fread(buf, 1, 16, f.get()) != 16)
            throw FormatError("cache_read: truncated record " + std::to_string(i) + " in " + path,
                              offset);
        CacheRecord rec{detail::get_u64_le(buf), detail::get_u64_le(buf + 8)};
        if (rec.n >= kCacheMaxIndex)
            throw FormatError("cache_read: record n=" + std::to_string(rec.n) +
                                  " outside representable range",
                              offset);
        records.push_back(rec);
    }
    return records;
}

}  // namespace cannonball
