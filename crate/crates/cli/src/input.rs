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

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ged_core::{parse_graphs_with, Graph, LabelSpace};

/// Graph files read so far, sharing one label table so that equal tokens
/// get equal ids across files.
#[derive(Default)]
pub struct GraphStore {
    space: LabelSpace,
    files: HashMap<PathBuf, Vec<Graph>>,
}

impl GraphStore {
    pub fn load(&mut self, path: &Path) -> Result<&[Graph]> {
        if !self.files.contains_key(path) {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let graphs =
                parse_graphs_with(&text, &mut self.space).with_context(|| format!("{}", path.display()))?;
            self.files.insert(path.to_path_buf(), graphs);
        }
        Ok(&self.files[path])
    }

    pub fn graph(&mut self, path: &Path, index: usize) -> Result<Graph> {
        let graphs = self.load(path)?;
        match graphs.get(index) {
            Some(g) => Ok(g.clone()),
            None => bail!(
                "{} holds {} graphs, index {index} is out of range",
                path.display(),
                graphs.len()
            ),
        }
    }
}

/// Resolves the positional inputs and `--pair` indices of the single-pair
/// commands. With one file both indices point into it (default `0 1`);
/// with two files the first index selects from the first file and the
/// second from the second (default `0 0`).
pub fn load_pair(inputs: &[PathBuf], pair: Option<&[usize]>) -> Result<(Graph, Graph)> {
    let mut store = GraphStore::default();
    let (p1, p2, defaults) = match inputs {
        [one] => (one, one, [0, 1]),
        [a, b] => (a, b, [0, 0]),
        _ => bail!("expected one or two graph files"),
    };
    let [i, j] = match pair {
        Some(&[i, j]) => [i, j],
        Some(_) => bail!("--pair takes two indices"),
        None => defaults,
    };
    Ok((store.graph(p1, i)?, store.graph(p2, j)?))
}
