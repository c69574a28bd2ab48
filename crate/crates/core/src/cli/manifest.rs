//! Run manifests: the resolved plan plus provenance and output file names,
//! in the same `key=value` format as configuration files.

use std::path::Path;

use super::config::{parse_key_values, resolve, Command, ConfigSources, Plan};
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.cfg";

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub plan: Plan,
    pub tool_version: String,
    pub created_unix: u64,
    /// Output files relative to the manifest's directory, by role.
    pub outputs: Vec<(String, String)>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = String::from("# lexsim run manifest\n");
        s.push_str(&format!("tool_version={}\n", self.tool_version));
        s.push_str(&format!("created_unix={}\n", self.created_unix));
        s.push_str(&format!("command={}\n", self.plan.command));
        for (k, v) in self.plan.to_key_values() {
            s.push_str(&format!("{k}={v}\n"));
        }
        for (role, file) in &self.outputs {
            s.push_str(&format!("output.{role}={file}\n"));
        }
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |message: String| Error::Manifest {
            path: path.to_path_buf(),
            message,
        };
        let mut tool_version = None;
        let mut created_unix = None;
        let mut command = None;
        let mut config = Vec::new();
        let mut outputs = Vec::new();
        for (key, value) in parse_key_values(text)? {
            match key.as_str() {
                "tool_version" => tool_version = Some(value),
                "created_unix" => {
                    created_unix = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("bad created_unix `{value}`")))?,
                    )
                }
                "command" => command = Some(value.parse::<Command>()?),
                _ => match key.strip_prefix("output.") {
                    Some(role) => outputs.push((role.to_string(), value)),
                    None => config.push((key, value)),
                },
            }
        }
        let command = command.ok_or_else(|| err("missing `command`".into()))?;
        if !config.iter().any(|(k, _)| k == "seed") {
            return Err(err("missing `seed`".into()));
        }
        let plan = resolve(
            command,
            &ConfigSources {
                file: config,
                ..Default::default()
            },
        )?;
        Ok(RunManifest {
            plan,
            tool_version: tool_version.ok_or_else(|| err("missing `tool_version`".into()))?,
            created_unix: created_unix.ok_or_else(|| err("missing `created_unix`".into()))?,
            outputs,
        })
    }
}
