use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    /// String-valued, compared by equality only.
    Categorical,
    /// Integer-valued; admits range predicates.
    Integer,
}

impl fmt::Display for AttrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttrKind::Categorical => "categorical",
            AttrKind::Integer => "integer",
        })
    }
}

impl FromStr for AttrKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cat" | "categorical" | "str" | "string" => Ok(AttrKind::Categorical),
            "int" | "integer" => Ok(AttrKind::Integer),
            other => Err(Error::InvalidSchema(format!("unknown attribute kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
}

/// Ordered list of uniquely named attributes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Attribute>", into = "Vec<Attribute>")]
pub struct Schema {
    attributes: Vec<Attribute>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        let mut seen = HashSet::new();
        for a in &attributes {
            if a.name.trim().is_empty() {
                return Err(Error::InvalidSchema("attribute names must be nonempty".into()));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(Error::InvalidSchema(format!("duplicate attribute `{}`", a.name)));
            }
        }
        Ok(Schema { attributes })
    }

    /// Convenience constructor from `(name, kind)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, AttrKind)>) -> Result<Self> {
        Schema::new(pairs.into_iter().map(|(name, kind)| Attribute { name: name.to_owned(), kind }).collect())
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }
}

impl TryFrom<Vec<Attribute>> for Schema {
    type Error = Error;

    fn try_from(attributes: Vec<Attribute>) -> Result<Self> {
        Schema::new(attributes)
    }
}

impl From<Schema> for Vec<Attribute> {
    fn from(s: Schema) -> Self {
        s.attributes
    }
}

/// Parses declarations of the form `age:int,nationality:cat,score:int`.
impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut attrs = Vec::new();
        for decl in s.split(',').map(str::trim).filter(|d| !d.is_empty()) {
            let (name, kind) = decl
                .split_once(':')
                .ok_or_else(|| Error::InvalidSchema(format!("declaration `{decl}` is not of the form name:kind")))?;
            attrs.push(Attribute { name: name.trim().to_owned(), kind: kind.parse()? });
        }
        Schema::new(attrs)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.attributes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let kind = match a.kind {
                AttrKind::Categorical => "cat",
                AttrKind::Integer => "int",
            };
            write!(f, "{}:{kind}", a.name)?;
        }
        Ok(())
    }
}
