/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <set>

#include "common/checksum.hpp"
#include "common/csv.hpp"
#include "common/kv_config.hpp"
#include "common/rng.hpp"
#include "doctest.h"
#include "support.hpp"

namespace nkws {

TEST_SUITE("common") {
  TEST_CASE("csv round-trips quoted fields with LF endings") {
    CsvTable t;
    t.header = {"a", "b"};
    t.rows = {{"plain", "with,comma"}, {"quote\"d", ""}};
    const std::string text = format_csv(t);
    CHECK(text == "a,b\nplain,\"with,comma\"\n\"quote\"\"d\",\n");
    const CsvTable back = parse_csv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
  }

  TEST_CASE("fixed six decimals") {
    CHECK(format_fixed6(0.5) == "0.500000");
    CHECK(format_fixed6(1.0 / 3.0) == "0.333333");
  }

  TEST_CASE("crc32 of the standard check string") {
    const std::string s = "123456789";
    CHECK(crc32({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}) == 0xCBF43926u);
    CHECK(hex32(0xCBF43926u) == "cbf43926");
  }

  TEST_CASE("key-value config parsing and overrides") {
    auto c = KvConfig::parse("# comment\nalpha = 1.5\nlist = 1, 2,3\nflag = true\n");
    CHECK(c.get_double("alpha", 0) == 1.5);
    CHECK(c.get_int_list("list", {}) == std::vector<int>{1, 2, 3});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_int("missing", 42) == 42);
    KvConfig o;
    o.set("alpha", "2");
    c.merge(o);
    CHECK(c.get_double("alpha", 0) == 2.0);
    CHECK(KvConfig::parse(c.to_text()).entries() == c.entries());
    NKWS_CHECK_ERROR(KvConfig::parse("no equals sign"), ErrorCode::kConfigInvalid);
    NKWS_CHECK_ERROR(c.get_int("alpha", 0) + KvConfig::parse("x = y").get_int("x", 0),
                     ErrorCode::kConfigInvalid);
  }

  TEST_CASE("rng streams are reproducible and bounded") {
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng r(9);
    std::set<std::size_t> seen;
    for (int i = 0; i < 2000; ++i) {
      const auto v = r.uniform_index(7);
      CHECK(v < 7);
      seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a", 0) != derive_seed(1, "a", 1));
    CHECK(derive_seed(3, "x", 2) == derive_seed(3, "x", 2));
  }
}

}  // namespace nkws
