// Copyright 2026 The qtomo Authors
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

#pragma once

namespace qtomo::cli {

// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or config error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitUsage = 2;

int qtomo_main(int argc, char** argv);
int tomo_main(int argc, char** argv);
int hardcase_main(int argc, char** argv);
int mic_main(int argc, char** argv);
int bound_main(int argc, char** argv);
int mi_main(int argc, char** argv);

}  // namespace qtomo::cli
