// Copyright 2026 The permspec Authors
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

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "permspec/error.hpp"
#include "permspec/funcs.hpp"

namespace permspec {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = done() ? "end of input" : "'" + std::string(1, text_[pos_]) + "'";
    throw Error(ErrorKind::ParseError, "at position " + std::to_string(pos_) + ": expected " +
                                           expected + ", found " + got);
  }

  void expect(char c) {
    if (peek() != c) fail("'" + std::string(1, c) + "'");
    ++pos_;
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || !std::isfinite(v)) fail("number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

struct Param {
  std::optional<double> value;
  std::size_t where = 0;
};

FunctionSpec parse_indicator(Cursor& in) {
  Param a, b;
  Endpoints ends = Endpoints::Open;
  do {
    const std::size_t at = in.pos();
    const std::string key = in.identifier();
    in.expect('=');
    if (key == "a") {
      a = {in.number(), at};
    } else if (key == "b") {
      b = {in.number(), at};
    } else if (key == "ends") {
      const std::string v = in.identifier();
      if (v == "open") ends = Endpoints::Open;
      else if (v == "right") ends = Endpoints::RightClosed;
      else throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) +
                                                  ": expected ends=open or ends=right");
    } else {
      throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) +
                                             ": expected one of a, b, ends; found '" + key + "'");
    }
  } while (in.accept(','));
  if (!in.done()) in.fail("',' or end of input");
  if (!a.value) throw Error(ErrorKind::ParseError, "indicator: missing parameter 'a'");
  if (!b.value) throw Error(ErrorKind::ParseError, "indicator: missing parameter 'b'");
  return FunctionSpec::indicator(*a.value, *b.value, ends);
}

std::vector<double> number_list(Cursor& in) {
  std::vector<double> out;
  do {
    out.push_back(in.number());
  } while (in.accept(','));
  return out;
}

FunctionSpec parse_trig(Cursor& in) {
  double a0 = 0.0;
  std::vector<double> cos_coeffs, sin_coeffs;
  do {
    const std::size_t at = in.pos();
    const std::string key = in.identifier();
    in.expect('=');
    if (key == "a0") a0 = in.number();
    else if (key == "cos") cos_coeffs = number_list(in);
    else if (key == "sin") sin_coeffs = number_list(in);
    else
      throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) +
                                             ": expected one of a0, cos, sin; found '" + key + "'");
  } while (in.accept(';'));
  if (!in.done()) in.fail("';' or end of input");
  return FunctionSpec::trig(a0, std::move(cos_coeffs), std::move(sin_coeffs));
}

FunctionSpec parse_plateau(Cursor& in) {
  Param a, b, eps;
  do {
    const std::size_t at = in.pos();
    const std::string key = in.identifier();
    in.expect('=');
    if (key == "a") a = {in.number(), at};
    else if (key == "b") b = {in.number(), at};
    else if (key == "eps") eps = {in.number(), at};
    else
      throw Error(ErrorKind::ParseError, "at position " + std::to_string(at) +
                                             ": expected one of a, b, eps; found '" + key + "'");
  } while (in.accept(','));
  if (!in.done()) in.fail("',' or end of input");
  if (!a.value) throw Error(ErrorKind::ParseError, "plateau: missing parameter 'a'");
  if (!b.value) throw Error(ErrorKind::ParseError, "plateau: missing parameter 'b'");
  if (!eps.value) throw Error(ErrorKind::ParseError, "plateau: missing parameter 'eps'");
  return FunctionSpec::plateau(*a.value, *b.value, *eps.value);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt17(xs[i]);
  }
  return out;
}

}  // namespace

FunctionSpec parse_function(std::string_view text) {
  Cursor in(text);
  const std::string family = in.identifier();
  in.expect(':');
  if (family == "indicator") return parse_indicator(in);
  if (family == "trig") return parse_trig(in);
  if (family == "plateau") return parse_plateau(in);
  throw Error(ErrorKind::ParseError,
              "at position 0: expected indicator, trig or plateau; found '" + family + "'");
}

std::string to_string(const FunctionSpec& f) {
  if (const auto* ind = f.as<Indicator>()) {
    return "indicator:a=" + fmt17(ind->a) + ",b=" + fmt17(ind->b) +
           (ind->ends == Endpoints::Open ? ",ends=open" : ",ends=right");
  }
  if (const auto* p = f.as<TrigPoly>()) {
    std::string out = "trig:a0=" + fmt17(p->a0);
    if (!p->cos_coeffs.empty()) out += ";cos=" + join(p->cos_coeffs);
    if (!p->sin_coeffs.empty()) out += ";sin=" + join(p->sin_coeffs);
    return out;
  }
  const auto& p = *f.as<SmoothPlateau>();
  return "plateau:a=" + fmt17(p.a) + ",b=" + fmt17(p.b) + ",eps=" + fmt17(p.eps);
}

}  // namespace permspec
