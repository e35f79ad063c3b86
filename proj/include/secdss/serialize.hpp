#pragma once

#include <string>

#include "json.hpp"
#include "secdss/msrcode.hpp"
#include "secdss/secrecy.hpp"

namespace secdss {

using Json = nlohmann::ordered_json;

// Fields serialize as {p, m, modulus}, matrices as
// {field, rows, cols, entries} with row-major canonical encodings. Node ids
// in patterns and reports are 1-based on the wire.

Json field_to_json(const Field& f);
FieldPtr field_from_json(const Json& j);

Json matrix_to_json(const Mat<Field>& m);
Mat<Field> matrix_from_json(const Json& j);

Json params_to_json(const DssParams& p);
DssParams params_from_json(const Json& j);

Json code_to_json(const MsrCode& code);
MsrCode code_from_json(const Json& j);

Json pattern_to_json(const EavesdropperPattern& p);
EavesdropperPattern pattern_from_json(const Json& j);

Json rational_to_json(const Rational& r);

Json leakage_report_to_json(const LeakageReport& r);

Json capacity_search_to_json(const CapacitySearchResult& r);

/// Header of capacity tables: n,k,d,alpha,l1,l2,bound,achieved.
std::string capacity_csv_header();
/// One CSV row; bound is printed as an integer or num/den, achieved may be
/// empty when no achievability search ran.
std::string capacity_csv_row(int n, int k, int d, int alpha, int l1, int l2,
                             const Rational& bound, const std::string& achieved);

std::string write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace secdss
