// Copyright 2026 The cogdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cogdb/csv.h"

#include <json.hpp>

#include "cogdb/error.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"

namespace cogdb {

using nlohmann::json;

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;

  // Skip a UTF-8 byte-order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line.
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };

  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kFormat, "unterminated quoted CSV field");
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

NumericMode parse_numeric_mode(const json& col) {
  const std::string mode = col.value("mode", std::string("literal"));
  if (mode == "literal") return NumericMode::literal();
  if (mode == "rounded") return NumericMode::rounded(col.value("precision", 2));
  if (mode == "kmeans") return NumericMode::kmeans(col.value("k", 1));
  if (mode == "range_rule") {
    std::vector<RangeRule> ranges;
    for (const json& r : col.at("ranges")) {
      RangeRule rule;
      if (r.contains("upper") && !r.at("upper").is_null()) {
        rule.upper = r.at("upper").get<double>();
      }
      rule.token = r.at("token").get<std::string>();
      ranges.push_back(std::move(rule));
    }
    return NumericMode::range_rule(std::move(ranges));
  }
  throw Error(ErrorCode::kSchema, "unknown numeric mode '" + mode + "'");
}

}  // namespace

std::string write_csv(const std::vector<std::vector<std::string>>& records) {
  std::string out;
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i) out += ',';
      out += quote_csv(rec[i]);
    }
    out += '\n';
  }
  return out;
}

TableSchema parse_schema_json(std::string_view json_text) {
  TableSchema schema;
  try {
    const json doc = json::parse(json_text);
    schema.table = doc.value("table", std::string());
    for (const json& col : doc.at("columns")) {
      ColumnSchema c;
      c.name = col.at("name").get<std::string>();
      const std::string kind = col.value("kind", std::string("text"));
      auto parsed = parse_column_kind(kind);
      if (!parsed) {
        throw Error(ErrorCode::kSchema, "unknown column kind '" + kind + "'");
      }
      c.kind = *parsed;
      if (c.kind == ColumnKind::kNumeric) c.numeric_mode = parse_numeric_mode(col);
      c.weight = col.value("weight", 1.0);
      c.prepend_name = col.value("prepend_name", false);
      schema.columns.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("schema sidecar: ") + e.what());
  }
  validate_schema(schema.columns);
  return schema;
}

std::string schema_to_json(const TableSchema& schema) {
  json doc;
  doc["table"] = schema.table;
  doc["columns"] = json::array();
  for (const ColumnSchema& c : schema.columns) {
    json col;
    col["name"] = c.name;
    col["kind"] = std::string(column_kind_name(c.kind));
    if (c.kind == ColumnKind::kNumeric) {
      const NumericMode& m = c.numeric_mode;
      switch (m.kind) {
        case NumericMode::Kind::kLiteral: col["mode"] = "literal"; break;
        case NumericMode::Kind::kRounded:
          col["mode"] = "rounded";
          col["precision"] = m.precision;
          break;
        case NumericMode::Kind::kKMeans:
          col["mode"] = "kmeans";
          col["k"] = m.k;
          break;
        case NumericMode::Kind::kRangeRule: {
          col["mode"] = "range_rule";
          json ranges = json::array();
          for (const RangeRule& r : m.ranges) {
            json jr;
            jr["token"] = r.token;
            if (std::isfinite(r.upper)) jr["upper"] = r.upper;
            ranges.push_back(jr);
          }
          col["ranges"] = ranges;
          break;
        }
      }
    }
    if (c.weight != 1.0) col["weight"] = c.weight;
    if (c.prepend_name) col["prepend_name"] = true;
    doc["columns"].push_back(col);
  }
  return doc.dump(2) + "\n";
}

std::vector<ColumnSchema> infer_schema(
    const std::vector<std::vector<std::string>>& records) {
  if (records.empty()) throw Error(ErrorCode::kSchema, "CSV has no header");
  const auto& header = records.front();
  std::vector<ColumnSchema> schema;
  for (std::size_t c = 0; c < header.size(); ++c) {
    ColumnSchema col;
    col.name = std::string(util::trim(header[c]));
    if (c == 0) {
      col.kind = ColumnKind::kPrimaryKey;
    } else {
      bool numeric = true, any = false;
      for (std::size_t r = 1; r < records.size() && numeric; ++r) {
        if (c >= records[r].size()) continue;
        const std::string_view cell = util::trim(records[r][c]);
        if (cell.empty()) continue;
        double v;
        any = true;
        numeric = util::parse_double(cell, v);
      }
      col.kind = (numeric && any) ? ColumnKind::kNumeric : ColumnKind::kText;
    }
    schema.push_back(std::move(col));
  }
  return schema;
}

RelationalTable table_from_records(
    std::string name, const std::vector<std::vector<std::string>>& records,
    const std::vector<ColumnSchema>& schema) {
  if (records.empty()) throw Error(ErrorCode::kSchema, "CSV has no header");
  const auto& header = records.front();
  std::vector<std::size_t> source(schema.size());
  for (std::size_t s = 0; s < schema.size(); ++s) {
    bool found = false;
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (util::iequals(util::trim(header[h]), schema[s].name)) {
        source[s] = h;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kSchema,
                  "schema column '" + schema[s].name + "' not in CSV header");
    }
  }
  RelationalTable table(std::move(name), schema);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw Error(ErrorCode::kSchema, "CSV record " + std::to_string(r + 1) +
                                          " has " + std::to_string(rec.size()) +
                                          " fields, header has " +
                                          std::to_string(header.size()));
    }
    RelationalTable::Row row;
    row.reserve(schema.size());
    for (std::size_t s = 0; s < schema.size(); ++s) {
      const std::string_view cell = util::trim(rec[source[s]]);
      if (cell.empty()) {
        row.emplace_back(std::monostate{});
      } else if (schema[s].kind == ColumnKind::kNumeric) {
        double v;
        if (!util::parse_double(cell, v)) {
          throw Error(ErrorCode::kSchema, "non-numeric value '" +
                                              std::string(cell) +
                                              "' in numeric column " +
                                              schema[s].name);
        }
        row.emplace_back(v);
      } else {
        row.emplace_back(std::string(cell));
      }
    }
    table.add_row(std::move(row));
  }
  return table;
}

RelationalTable load_csv_table(const std::filesystem::path& csv_path,
                               const std::filesystem::path& schema_path) {
  const auto records = parse_csv(util::read_file(csv_path));
  if (schema_path.empty()) {
    return table_from_records(csv_path.stem().string(), records,
                              infer_schema(records));
  }
  TableSchema schema = parse_schema_json(util::read_file(schema_path));
  std::string name =
      schema.table.empty() ? csv_path.stem().string() : schema.table;
  return table_from_records(std::move(name), records, schema.columns);
}

std::string table_to_csv(const RelationalTable& table) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> header;
  for (const ColumnSchema& c : table.columns()) header.push_back(c.name);
  records.push_back(std::move(header));
  for (const auto& row : table.rows()) {
    std::vector<std::string> rec;
    for (const Cell& cell : row) rec.push_back(cell_to_string(cell));
    records.push_back(std::move(rec));
  }
  return write_csv(records);
}

}  // namespace cogdb
