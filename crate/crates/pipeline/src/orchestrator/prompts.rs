//! Prompt templates and `{placeholder}` rendering.

use std::collections::BTreeMap;
use std::path::Path;

macro_rules! builtin_prompts {
    ($($name:literal),+ $(,)?) => {
        /// Every template name, in file order.
        pub const PROMPT_NAMES: &[&str] = &[$($name),+];

        fn builtin_text(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../../prompts/", $name, ".txt"))),)+
                _ => None,
            }
        }
    };
}

builtin_prompts!(
    "task",
    "direct",
    "cot_1",
    "cot_2",
    "cot_3",
    "tot_initial",
    "tot_expand",
    "tot_evaluate",
    "tot_final",
    "cotr_1",
    "cotr_2",
    "cotr_3",
    "cotr_reflexion",
    "cote_1",
    "cote_solve",
    "dsl_guide",
    "structure",
    "cotapi_1",
    "cotapi_3",
    "cotapi_call",
    "function_results",
    "cotapi_4",
    "confidence",
);

#[derive(Debug, thiserror::Error)]
pub enum PromptError {
    #[error("prompt `{name}`: {source}")]
    Io {
        name: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown prompt `{0}`")]
    Unknown(String),
}

/// A complete set of templates keyed by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    templates: BTreeMap<String, String>,
}

impl Default for PromptSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PromptSet {
    /// The templates compiled into the crate.
    pub fn builtin() -> Self {
        let templates = PROMPT_NAMES
            .iter()
            .map(|n| (n.to_string(), builtin_text(n).expect("listed prompt").trim_end().to_string()))
            .collect();
        Self { templates }
    }

    /// Builtin templates overridden by any `<name>.txt` present in `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, PromptError> {
        let mut set = Self::builtin();
        for name in PROMPT_NAMES {
            let path = dir.as_ref().join(format!("{name}.txt"));
            if path.exists() {
                let text = std::fs::read_to_string(&path).map_err(|source| PromptError::Io {
                    name: name.to_string(),
                    source,
                })?;
                set.templates.insert(name.to_string(), text.trim_end().to_string());
            }
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&str, PromptError> {
        self.templates
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| PromptError::Unknown(name.to_string()))
    }

    pub fn render(&self, name: &str, vars: &[(&str, &str)]) -> Result<String, PromptError> {
        Ok(render(self.get(name)?, vars))
    }
}

/// Replace each `{key}` whose key is listed in `vars`. Everything else,
/// including JSON braces and unknown keys, is copied through. Substituted
/// values are never re-scanned.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let key_len = after
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(after.len());
        let hit = after[key_len..]
            .starts_with('}')
            .then(|| vars.iter().find(|(k, _)| *k == &after[..key_len]))
            .flatten();
        match hit {
            Some((_, v)) => {
                out.push_str(v);
                rest = &after[key_len + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_substitutes_known_keys_once() {
        let t = "a {x} b {y} {\"json\": 1} {x}";
        assert_eq!(render(t, &[("x", "{y}"), ("y", "2")]), "a {y} b 2 {\"json\": 1} {y}");
        assert_eq!(render("{", &[("x", "1")]), "{");
        assert_eq!(render("{x", &[("x", "1")]), "{x");
    }

    #[test]
    fn builtin_set_is_complete() {
        let p = PromptSet::builtin();
        for n in PROMPT_NAMES {
            assert!(!p.get(n).unwrap().is_empty(), "{n}");
        }
        assert!(p.get("tot_expand").unwrap().contains("{node_state}"));
        assert!(p.get("tot_final").unwrap().contains("{reasoning_path}"));
        assert!(p.get("cotr_reflexion").unwrap().contains("repeat_please"));
        assert!(p.get("cote_solve").unwrap().contains("tqdsl"));
        assert!(p.get("nope").is_err());
    }

    #[test]
    fn directory_overrides_builtin() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("direct.txt"), "custom {task}\n").unwrap();
        let p = PromptSet::load_dir(dir.path()).unwrap();
        assert_eq!(p.get("direct").unwrap(), "custom {task}");
        assert_eq!(p.get("cot_1").unwrap(), PromptSet::builtin().get("cot_1").unwrap());
    }
}
