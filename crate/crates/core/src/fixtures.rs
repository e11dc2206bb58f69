// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Bundled regression scenarios.

use crate::model::Scenario;

pub const MOTIVATING_EXAMPLE: &str = include_str!("../fixtures/fig2_motivating.scn");
pub const APPENDIX_A_DUAL_GRAPH: &str = include_str!("../fixtures/appendixA_dualgraph.scn");
pub const BROADCAST_BEATS_ONC: &str = include_str!("../fixtures/fig7_broadcast_beats_onc.scn");

/// Fixture names as accepted by the CLI, with their text.
pub const ALL: [(&str, &str); 3] = [
    ("fig2_motivating", MOTIVATING_EXAMPLE),
    ("appendixA_dualgraph", APPENDIX_A_DUAL_GRAPH),
    ("fig7_broadcast_beats_onc", BROADCAST_BEATS_ONC),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn motivating_example() -> Scenario {
    Scenario::from_text(MOTIVATING_EXAMPLE).expect("bundled fixture parses")
}

pub fn appendix_a_dual_graph() -> Scenario {
    Scenario::from_text(APPENDIX_A_DUAL_GRAPH).expect("bundled fixture parses")
}

pub fn broadcast_beats_onc() -> Scenario {
    Scenario::from_text(BROADCAST_BEATS_ONC).expect("bundled fixture parses")
}
