// Copyright 2026 The xdfgrad Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <regex>
#include <sstream>

#include "xdfgrad/hamiltonian.hpp"

namespace xdf {

namespace {

constexpr double kConflictTol = 1e-10;

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::optional<long> header_int(const std::string &header, const std::string &key) {
    const std::regex re("(^|[\\s,&])" + key + "\\s*=\\s*([-+]?\\d+)");
    std::smatch m;
    if (std::regex_search(header, m, re)) {
        return std::stol(m[2].str());
    }
    return std::nullopt;
}

double parse_value(std::string tok, std::size_t line_no) {
    std::replace(tok.begin(), tok.end(), 'D', 'E');
    std::replace(tok.begin(), tok.end(), 'd', 'e');
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
        throw FcidumpError("line " + std::to_string(line_no) + ": bad value '" + tok + "'");
    }
    return v;
}

int parse_index(const std::string &tok, std::size_t line_no) {
    std::size_t used = 0;
    long v = -1;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != tok.size()) {
        throw FcidumpError("line " + std::to_string(line_no) + ": bad index '" + tok + "'");
    }
    return static_cast<int>(v);
}

class Filler {
  public:
    explicit Filler(int n) : n_(n), h_set_(n * n, false), v_set_(static_cast<std::size_t>(n) * n * n * n, false) {}

    void core(Hamiltonian &h, double v, std::size_t line_no) {
        assign(h.core_energy, core_set_, v, line_no);
    }

    void one_body(Hamiltonian &h, int p, int q, double v, std::size_t line_no) {
        assign(h.one_body(p, q), h_set_[p * n_ + q], v, line_no);
        assign(h.one_body(q, p), h_set_[q * n_ + p], v, line_no);
    }

    void two_body(Hamiltonian &h, int p, int q, int r, int s, double v, std::size_t line_no) {
        const int images[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                                  {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
        for (const auto &im : images) {
            const std::size_t idx = ((static_cast<std::size_t>(im[0]) * n_ + im[1]) * n_ + im[2]) * n_ + im[3];
            bool flag = v_set_[idx];
            assign(h.two_body(im[0], im[1], im[2], im[3]), flag, v, line_no);
            v_set_[idx] = flag;
        }
    }

  private:
    template <class Flag> static void assign(double &slot, Flag &&flag, double v, std::size_t line_no) {
        if (flag) {
            if (std::abs(slot - v) > kConflictTol) {
                throw FcidumpError("line " + std::to_string(line_no) + ": conflicting duplicate entry");
            }
            return;
        }
        slot = v;
        flag = true;
    }

    int n_;
    bool core_set_ = false;
    std::vector<bool> h_set_;
    std::vector<bool> v_set_;
};

} // namespace

Hamiltonian parse_fcidump(std::istream &in) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string up = upper(text);

    const std::size_t start = up.find("&FCI");
    if (start == std::string::npos) {
        throw FcidumpError("missing &FCI namelist header");
    }
    std::size_t end = std::string::npos;
    std::size_t end_len = 0;
    for (const std::string term : {"&END", "$END", "/"}) {
        const std::size_t pos = up.find(term, start + 4);
        if (pos != std::string::npos && pos < end) {
            end = pos;
            end_len = term.size();
        }
    }
    if (end == std::string::npos) {
        throw FcidumpError("unterminated namelist header");
    }
    const std::string header = up.substr(start + 4, end - start - 4);
    const auto norb = header_int(header, "NORB");
    const auto nelec = header_int(header, "NELEC");
    const long ms2 = header_int(header, "MS2").value_or(0);
    if (!norb || !nelec) {
        throw FcidumpError("header must define NORB and NELEC");
    }
    const long n = *norb;
    if (n < 1 || n > 64) {
        throw FcidumpError("NORB out of range");
    }
    if (*nelec < 0 || (*nelec + ms2) % 2 != 0 || std::abs(ms2) > *nelec) {
        throw FcidumpError("inconsistent NELEC/MS2");
    }
    const int n_alpha = static_cast<int>((*nelec + ms2) / 2);
    const int n_beta = static_cast<int>((*nelec - ms2) / 2);
    if (n_alpha > n || n_beta > n) {
        throw FcidumpError("more electrons than spin orbitals");
    }

    Hamiltonian h = zero_hamiltonian(static_cast<int>(n), n_alpha, n_beta);
    Filler fill(static_cast<int>(n));

    const std::size_t body = end + end_len;
    std::size_t line_no = static_cast<std::size_t>(std::count(text.begin(), text.begin() + body, '\n')) + 1;
    std::istringstream rest(text.substr(body));
    std::string line;
    bool first = true;
    while (std::getline(rest, line)) {
        if (!first) {
            ++line_no;
        }
        first = false;
        std::istringstream ls(line);
        std::vector<std::string> tok{std::istream_iterator<std::string>(ls), std::istream_iterator<std::string>()};
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != 5) {
            throw FcidumpError("line " + std::to_string(line_no) + ": expected 'value i j k l'");
        }
        const double v = parse_value(tok[0], line_no);
        int idx[4];
        for (int a = 0; a < 4; ++a) {
            idx[a] = parse_index(tok[a + 1], line_no);
            if (idx[a] < 0 || idx[a] > n) {
                throw FcidumpError("line " + std::to_string(line_no) + ": index out of range");
            }
        }
        const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
        if (i > 0 && j > 0 && k > 0 && l > 0) {
            fill.two_body(h, i - 1, j - 1, k - 1, l - 1, v, line_no);
        } else if (i > 0 && j > 0 && k == 0 && l == 0) {
            fill.one_body(h, i - 1, j - 1, v, line_no);
        } else if (i == 0 && j == 0 && k == 0 && l == 0) {
            fill.core(h, v, line_no);
        } else if (i > 0 && j == 0 && k == 0 && l == 0) {
            continue; // orbital energy record
        } else {
            throw FcidumpError("line " + std::to_string(line_no) + ": index out of range");
        }
    }
    return h;
}

Hamiltonian parse_fcidump_string(const std::string &text) {
    std::istringstream in(text);
    return parse_fcidump(in);
}

Hamiltonian read_fcidump(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw FcidumpError("cannot open '" + path + "'");
    }
    return parse_fcidump(in);
}

std::string write_fcidump(const Hamiltonian &h) {
    validate(h);
    const int n = h.n_orbitals;
    std::ostringstream out;
    out << "&FCI NORB=" << n << ",NELEC=" << h.n_electrons() << ",MS2=" << (h.n_alpha - h.n_beta) << ",\n ORBSYM=";
    for (int p = 0; p < n; ++p) {
        out << "1,";
    }
    out << "\n ISYM=1,\n&END\n";

    char buf[96];
    auto record = [&](double v, int i, int j, int k, int l) {
        std::snprintf(buf, sizeof(buf), "%24.16e %3d %3d %3d %3d\n", v, i, j, k, l);
        out << buf;
    };
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q <= p; ++q) {
            const int pq = p * (p + 1) / 2 + q;
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s <= r; ++s) {
                    const int rs = r * (r + 1) / 2 + s;
                    if (rs > pq) {
                        continue;
                    }
                    const double v = h.two_body(p, q, r, s);
                    if (v != 0.0) {
                        record(v, p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q <= p; ++q) {
            const double v = h.one_body(p, q);
            if (v != 0.0) {
                record(v, p + 1, q + 1, 0, 0);
            }
        }
    }
    record(h.core_energy, 0, 0, 0, 0);
    return out.str();
}

} // namespace xdf
