/*
 * Copyright 2026 The AdaPU Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "adapu/dataset.h"

namespace adapu {
namespace {

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Strict decimal parse: the whole (trimmed) cell must be a finite number.
bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

// Reads RFC-4180 records: quoted fields may contain the delimiter, doubled
// quotes and line breaks. CRLF and LF endings are both accepted.
class CsvRecordReader {
 public:
  CsvRecordReader(std::istream& in, char delimiter, std::string source)
      : in_(in), delimiter_(delimiter), source_(std::move(source)) {}

  // Returns false at end of input. Blank lines are skipped.
  bool Next(std::vector<std::string>& fields) {
    while (true) {
      fields.clear();
      record_line_ = line_ + 1;
      if (in_.peek() == std::char_traits<char>::eof()) return false;
      std::string field;
      bool quoted = false;
      bool field_was_quoted = false;
      bool any = false;
      int c;
      while ((c = in_.get()) != std::char_traits<char>::eof()) {
        any = true;
        if (quoted) {
          if (c == '"') {
            if (in_.peek() == '"') {
              field.push_back('"');
              in_.get();
            } else {
              quoted = false;
            }
          } else {
            if (c == '\n') ++line_;
            field.push_back(static_cast<char>(c));
          }
          continue;
        }
        if (c == '"' && Trim(field).empty() && !field_was_quoted) {
          field.clear();
          quoted = true;
          field_was_quoted = true;
        } else if (c == delimiter_) {
          fields.push_back(std::move(field));
          field.clear();
          field_was_quoted = false;
        } else if (c == '\n') {
          ++line_;
          break;
        } else {
          field.push_back(static_cast<char>(c));
        }
      }
      if (quoted) {
        throw ParseError(source_, record_line_, 0, "unterminated quoted field");
      }
      if (!any) return false;
      if (c == std::char_traits<char>::eof()) ++line_;
      fields.push_back(std::move(field));
      if (fields.size() == 1 && Trim(fields[0]).empty()) continue;
      return true;
    }
  }

  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::string source_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

double ParseCell(const std::string& cell, const std::string& source,
                 std::size_t line, std::size_t column) {
  double value;
  if (Trim(cell).empty()) {
    throw ParseError(source, line, column, "missing value");
  }
  if (!ParseDouble(cell, value)) {
    throw ParseError(source, line, column,
                     "cannot parse '" + cell + "' as a finite number");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}


LabeledDataset ReadCsv(std::istream& in, const CsvOptions& options,
                       const std::string& source) {
  CsvRecordReader reader(in, options.delimiter, source);
  std::vector<std::string> fields;
  std::vector<std::string> header;
  if (options.has_header) {
    if (!reader.Next(header)) throw ParseError(source, 1, 0, "empty file");
    for (auto& h : header) h = std::string(Trim(h));
  } else if (options.label_column.name) {
    throw DataError("a label column name requires a header row");
  }

  LabeledDataset data;
  std::optional<std::size_t> width;
  std::size_t label_col = 0;
  std::vector<std::string> raw_labels;
  std::vector<double> row;

  auto resolve_label = [&](std::size_t columns) {
    if (options.label_column.name) {
      const auto it = std::find(header.begin(), header.end(),
                                *options.label_column.name);
      if (it == header.end()) {
        throw ParseError(source, 1, 0,
                         "no column named '" + *options.label_column.name +
                             "'");
      }
      return static_cast<std::size_t>(it - header.begin());
    }
    if (options.label_column.index) {
      if (*options.label_column.index >= columns) {
        throw DataError("label column index " +
                        std::to_string(*options.label_column.index) +
                        " out of range");
      }
      return *options.label_column.index;
    }
    return columns - 1;
  };

  if (options.has_header) {
    width = header.size();
    label_col = resolve_label(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != label_col) data.feature_names.push_back(header[c]);
    }
  }

  while (reader.Next(fields)) {
    const std::size_t line = reader.record_line();
    if (!width) {
      width = fields.size();
      label_col = resolve_label(fields.size());
    }
    if (fields.size() != *width) {
      throw ParseError(source, line, 0,
                       "expected " + std::to_string(*width) +
                           " columns, found " + std::to_string(fields.size()));
    }
    if (*width < 2) {
      throw ParseError(source, line, 0, "need a label and at least one feature");
    }
    row.clear();
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) {
        const auto label = std::string(Trim(fields[c]));
        if (label.empty()) {
          throw ParseError(source, line, c + 1, "missing label");
        }
        raw_labels.push_back(label);
        continue;
      }
      row.push_back(ParseCell(fields[c], source, line, c + 1));
    }
    data.instances.AppendRow(row);
  }
  if (data.instances.rows() == 0) {
    throw ParseError(source, 0, 0, "no data rows");
  }

  const std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw ParseError(source, 0, label_col + 1,
                     "label column has " + std::to_string(distinct.size()) +
                         " distinct values; expected two");
  }
  data.labels.reserve(raw_labels.size());
  for (const auto& raw : raw_labels) {
    data.labels.push_back(raw == options.positive_label ? +1 : -1);
  }
  data.Validate();
  return data;
}

LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvOptions& options) {
  auto in = OpenOrThrow(path);
  return ReadCsv(in, options, path.string());
}

Matrix ReadFeatureCsv(std::istream& in, bool has_header, char delimiter,
                      const std::string& source) {
  CsvRecordReader reader(in, delimiter, source);
  std::vector<std::string> fields;
  if (has_header && !reader.Next(fields)) {
    throw ParseError(source, 1, 0, "empty file");
  }
  const std::optional<std::size_t> width =
      has_header ? std::optional<std::size_t>(fields.size()) : std::nullopt;
  Matrix m;
  std::vector<double> row;
  while (reader.Next(fields)) {
    const std::size_t line = reader.record_line();
    const std::size_t expected = width ? *width : (m.rows() ? m.cols() : 0);
    if (expected && fields.size() != expected) {
      throw ParseError(source, line, 0,
                       "expected " + std::to_string(expected) +
                           " columns, found " + std::to_string(fields.size()));
    }
    row.clear();
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(ParseCell(fields[c], source, line, c + 1));
    }
    m.AppendRow(row);
  }
  if (m.rows() == 0) throw ParseError(source, 0, 0, "no data rows");
  return m;
}

Matrix LoadFeatureCsv(const std::filesystem::path& path, bool has_header,
                      char delimiter) {
  auto in = OpenOrThrow(path);
  return ReadFeatureCsv(in, has_header, delimiter, path.string());
}

void WriteCsv(const LabeledDataset& data, const std::filesystem::path& path,
              bool header, const std::string& positive_label,
              const std::string& negative_label) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  if (header) {
    for (std::size_t c = 0; c < data.dims(); ++c) {
      out << (data.feature_names.empty() ? "x" + std::to_string(c)
                                         : data.feature_names[c])
          << ',';
    }
    out << "label\n";
  }
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.instances.row(r)) out << FormatDouble(v) << ',';
    out << (data.labels[r] == 1 ? positive_label : negative_label) << '\n';
  }
}

void WriteFeatureCsv(const Matrix& instances,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t r = 0; r < instances.rows(); ++r) {
    const auto row = instances.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << FormatDouble(row[c]);
    }
    out << '\n';
  }
}

LabeledDataset ReadSparseText(std::istream& in, std::size_t dimension,
                              const std::string& source) {
  if (dimension == 0) throw DataError("dimension must be positive");
  LabeledDataset data;
  data.instances = Matrix(0, dimension);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row(dimension);
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = Trim(line);
    if (rest.empty() || rest.front() == '#') continue;

    auto next_token = [&rest]() {
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest[0])))
        rest.remove_prefix(1);
      std::size_t len = 0;
      while (len < rest.size() &&
             !std::isspace(static_cast<unsigned char>(rest[len])))
        ++len;
      const auto tok = rest.substr(0, len);
      rest.remove_prefix(len);
      return tok;
    };

    const auto label_tok = next_token();
    int label;
    if (label_tok == "+1" || label_tok == "1") {
      label = 1;
    } else if (label_tok == "-1") {
      label = -1;
    } else {
      throw ParseError(source, line_no, 0,
                       "label must be +1 or -1, got '" +
                           std::string(label_tok) + "'");
    }
    std::fill(row.begin(), row.end(), 0.0);
    std::size_t previous = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(source, line_no, 0,
                         "expected idx:val, got '" + std::string(tok) + "'");
      }
      std::size_t index = 0;
      const auto idx_text = tok.substr(0, colon);
      const auto [ptr, ec] = std::from_chars(
          idx_text.data(), idx_text.data() + idx_text.size(), index);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size()) {
        throw ParseError(source, line_no, 0,
                         "bad feature index '" + std::string(idx_text) + "'");
      }
      if (index < 1 || index > dimension) {
        throw ParseError(source, line_no, 0,
                         "index " + std::to_string(index) +
                             " out of range [1, " + std::to_string(dimension) +
                             "]");
      }
      if (index <= previous) {
        throw ParseError(source, line_no, 0, "non-increasing index " +
                                                 std::to_string(index));
      }
      double value;
      if (!ParseDouble(tok.substr(colon + 1), value)) {
        throw ParseError(source, line_no, 0,
                         "bad feature value in '" + std::string(tok) + "'");
      }
      row[index - 1] = value;
      previous = index;
    }
    data.instances.AppendRow(row);
    data.labels.push_back(label);
  }
  if (data.labels.empty()) throw ParseError(source, 0, 0, "no data rows");
  data.Validate();
  return data;
}

LabeledDataset LoadSparseText(const std::filesystem::path& path,
                              std::size_t dimension) {
  auto in = OpenOrThrow(path);
  return ReadSparseText(in, dimension, path.string());
}

}  // namespace adapu
