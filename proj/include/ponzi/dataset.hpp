#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ponzi {

class MalformedRecord : public std::runtime_error {
public:
    MalformedRecord(int line, const std::string& why)
        : std::runtime_error("line " + std::to_string(line) + ": " + why), line(line) {}
    int line;
};

class DuplicateIdx : public std::runtime_error {
public:
    DuplicateIdx(int line, const std::string& idx)
        : std::runtime_error("line " + std::to_string(line) + ": duplicate idx \"" + idx + "\""),
          line(line),
          idx(idx) {}
    int line;
    std::string idx;
};

class MissingLabel : public std::runtime_error {
public:
    explicit MissingLabel(const std::string& idx)
        : std::runtime_error("record \"" + idx + "\" has no label but one is required") {}
};

struct DatasetRecord {
    std::string idx;  // numeric ids are canonicalized to their decimal text
    std::string source;
    std::optional<int> label;  // 1 = ponzi
};

// Line-delimited records: one JSON object per line with fields idx, source,
// and optional label. Solidity parse failures are not checked here.
std::vector<DatasetRecord> load_dataset(const std::string& path);

std::vector<DatasetRecord> parse_dataset(const std::string& text);

void save_dataset(const std::vector<DatasetRecord>& records, const std::string& path);

}  // namespace ponzi
