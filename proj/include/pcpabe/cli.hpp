/*
   Copyright 2026 The pcpabe Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <ostream>

namespace pcpabe::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kParse = 3,
    kAttCheck = 4,
    kIntegrity = 5,
    kDecrypt = 6,
    kIo = 7,
};

/// Entry point of the pcpabe tool, with its streams injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcpabe::cli
