#include "ponzi/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ponzi {

std::vector<DatasetRecord> parse_dataset(const std::string& text) {
    std::vector<DatasetRecord> records;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (obj.is_discarded() || !obj.is_object())
            throw MalformedRecord(line_no, "not a JSON object");

        DatasetRecord rec;
        if (!obj.contains("idx")) throw MalformedRecord(line_no, "missing idx");
        const auto& idx = obj["idx"];
        if (idx.is_string()) {
            rec.idx = idx.get<std::string>();
        } else if (idx.is_number_integer()) {
            rec.idx = std::to_string(idx.get<long long>());
        } else {
            throw MalformedRecord(line_no, "idx must be a string or integer");
        }
        if (!obj.contains("source") || !obj["source"].is_string())
            throw MalformedRecord(line_no, "missing or non-string source");
        rec.source = obj["source"].get<std::string>();
        if (obj.contains("label") && !obj["label"].is_null()) {
            if (!obj["label"].is_number_integer())
                throw MalformedRecord(line_no, "label must be 0 or 1");
            long long label = obj["label"].get<long long>();
            if (label != 0 && label != 1) throw MalformedRecord(line_no, "label must be 0 or 1");
            rec.label = static_cast<int>(label);
        }
        if (!seen.insert(rec.idx).second) throw DuplicateIdx(line_no, rec.idx);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

void save_dataset(const std::vector<DatasetRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    for (const auto& rec : records) {
        nlohmann::json obj;
        obj["idx"] = rec.idx;
        obj["source"] = rec.source;
        if (rec.label) obj["label"] = *rec.label;
        out << obj.dump() << "\n";
    }
}

}  // namespace ponzi
