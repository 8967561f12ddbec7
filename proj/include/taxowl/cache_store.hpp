// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "taxowl/error.hpp"
#include "taxowl/strings.hpp"

namespace taxowl {

struct CacheEntry {
    std::string request_key; // percent-encoded path+query, e.g. "species/match?name=Apis%20mellifera"
    std::string body;
    std::chrono::system_clock::time_point fetched_at;
    std::string backbone_note;
};

inline constexpr std::chrono::seconds kInfiniteAge{std::chrono::seconds::max()};

/// Durable one-directory store of raw API response bodies.
///
/// Layout: one file per entry named after the percent-encoded request key,
/// plus an append-only `index.tsv` manifest with lines
/// `request_key<TAB>filename<TAB>fetched_at[<TAB>note]`. Later manifest lines
/// win, so overwrites are plain appends. Bodies are committed with
/// write-then-rename, which keeps uncleanly closed stores free of torn
/// entries. The layout doubles as the fixture-replay format used by tests.
class CacheStore {
public:
    static constexpr const char* kIndexName = "index.tsv";

    explicit CacheStore(std::filesystem::path dir, bool read_only = false)
        : dir_(std::move(dir)), read_only_(read_only) {
        std::error_code ec;
        if (!read_only_) {
            std::filesystem::create_directories(dir_, ec);
            if (ec) {
                throw Error(ErrorCode::StoreIo,
                            "cannot create store directory " + dir_.string() + ": " + ec.message());
            }
        } else if (!std::filesystem::is_directory(dir_, ec)) {
            throw Error(ErrorCode::StoreIo, "store directory not found: " + dir_.string());
        }
        load_index();
    }

    const std::filesystem::path& directory() const { return dir_; }

    std::optional<CacheEntry> get(const std::string& request_key,
                                  std::chrono::seconds max_age = kInfiniteAge) const {
        if (max_age <= std::chrono::seconds::zero()) return std::nullopt;
        IndexRow row;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = index_.find(request_key);
            if (it == index_.end()) return std::nullopt;
            row = it->second;
        }
        if (max_age != kInfiniteAge) {
            auto age = std::chrono::system_clock::now() - row.fetched_at;
            if (age > max_age) return std::nullopt;
        }
        std::ifstream in(dir_ / row.filename, std::ios::binary);
        if (!in) return std::nullopt; // manifest line without a body: treat as absent
        std::ostringstream body;
        body << in.rdbuf();
        if (!in.good() && !in.eof()) {
            throw Error(ErrorCode::StoreIo, "failed reading " + (dir_ / row.filename).string());
        }
        CacheEntry entry;
        entry.request_key = request_key;
        entry.body = body.str();
        entry.fetched_at = row.fetched_at;
        entry.backbone_note = row.note;
        return entry;
    }

    void put(const CacheEntry& entry) {
        if (read_only_) {
            throw Error(ErrorCode::StoreIo, "store is read-only: " + dir_.string());
        }
        const std::string filename = filename_for_request(entry.request_key);
        const std::filesystem::path target = dir_ / filename;
        const std::filesystem::path tmp = dir_ / (filename + ".tmp-" + tmp_suffix());
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error(ErrorCode::StoreIo, "cannot write " + tmp.string());
            }
            out.write(entry.body.data(), static_cast<std::streamsize>(entry.body.size()));
            out.flush();
            if (!out.good()) {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw Error(ErrorCode::StoreIo, "short write to " + tmp.string());
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, target, ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::StoreIo, "cannot commit " + target.string() + ": " + ec.message());
        }

        std::string line = entry.request_key + "\t" + filename + "\t" + format_utc(entry.fetched_at);
        if (!entry.backbone_note.empty()) line += "\t" + entry.backbone_note;
        line += "\n";
        {
            std::lock_guard<std::mutex> lock(mutex_);
            std::ofstream out(dir_ / kIndexName, std::ios::app | std::ios::binary);
            if (!out) {
                throw Error(ErrorCode::StoreIo, "cannot append to manifest in " + dir_.string());
            }
            out << line;
            out.flush();
            if (!out.good()) {
                throw Error(ErrorCode::StoreIo, "failed appending to manifest in " + dir_.string());
            }
            index_[entry.request_key] = IndexRow{filename, entry.fetched_at, entry.backbone_note};
        }
    }

    bool contains(const std::string& request_key) const {
        std::lock_guard<std::mutex> lock(mutex_);
        return index_.count(request_key) > 0;
    }

    /// Recorded request keys with timestamps, manifest order collapsed to
    /// one row per key (last write wins).
    std::vector<CacheEntry> list() const {
        std::lock_guard<std::mutex> lock(mutex_);
        std::vector<CacheEntry> out;
        out.reserve(index_.size());
        for (const auto& [key, row] : index_) {
            CacheEntry e;
            e.request_key = key;
            e.fetched_at = row.fetched_at;
            e.backbone_note = row.note;
            out.push_back(std::move(e));
        }
        return out;
    }

    /// Removes all entries and the manifest.
    void clear() {
        if (read_only_) {
            throw Error(ErrorCode::StoreIo, "store is read-only: " + dir_.string());
        }
        std::lock_guard<std::mutex> lock(mutex_);
        std::error_code ec;
        for (const auto& [key, row] : index_) {
            std::filesystem::remove(dir_ / row.filename, ec);
        }
        std::filesystem::remove(dir_ / kIndexName, ec);
        index_.clear();
    }

private:
    struct IndexRow {
        std::string filename;
        std::chrono::system_clock::time_point fetched_at;
        std::string note;
    };

    void load_index() {
        std::ifstream in(dir_ / kIndexName, std::ios::binary);
        if (!in) return; // fresh store
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cols = split(line, '\t');
            if (cols.size() < 3) continue; // tolerate a torn trailing line
            auto ts = parse_utc(cols[2]);
            if (!ts) continue;
            IndexRow row;
            row.filename = cols[1];
            row.fetched_at = *ts;
            if (cols.size() > 3) row.note = cols[3];
            index_[cols[0]] = std::move(row);
        }
    }

    static std::string tmp_suffix() {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        std::ostringstream os;
        os << rd() << "-" << counter.fetch_add(1);
        return os.str();
    }

    std::filesystem::path dir_;
    bool read_only_;
    mutable std::mutex mutex_;
    std::map<std::string, IndexRow> index_;
};

} // namespace taxowl
