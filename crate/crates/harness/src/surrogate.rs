//! A synthetic stand-in for the nine-attribute census extract used in the
//! accuracy experiment, for when the real file is not available.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use relpriv::anonymizer::stream_rng;
use relpriv::model::{AttrKind, Relation, Schema, Tuple, Value};

/// Distinct tuples in the census extract after removing rows with missing values.
pub const ADULTS_N: usize = 30162;

pub const ADULTS_SCHEMA: &str = "age:int,workclass:cat,education:cat,marital-status:cat,occupation:cat,\
race:cat,sex:cat,native-country:cat,salary:cat";

/// (value, approximate frequency in the census extract)
type Marginal = &'static [(&'static str, u32)];

const WORKCLASS: Marginal = &[
    ("Private", 22286),
    ("Self-emp-not-inc", 2499),
    ("Local-gov", 2067),
    ("State-gov", 1279),
    ("Self-emp-inc", 1074),
    ("Federal-gov", 943),
    ("Without-pay", 14),
];

const EDUCATION: Marginal = &[
    ("HS-grad", 9840),
    ("Some-college", 6678),
    ("Bachelors", 5044),
    ("Masters", 1627),
    ("Assoc-voc", 1307),
    ("11th", 1048),
    ("Assoc-acdm", 1008),
    ("10th", 820),
    ("7th-8th", 557),
    ("Prof-school", 542),
    ("9th", 455),
    ("12th", 377),
    ("Doctorate", 375),
    ("5th-6th", 288),
    ("1st-4th", 151),
    ("Preschool", 45),
];

const MARITAL: Marginal = &[
    ("Married-civ-spouse", 14065),
    ("Never-married", 9726),
    ("Divorced", 4214),
    ("Separated", 939),
    ("Widowed", 827),
    ("Married-spouse-absent", 370),
    ("Married-AF-spouse", 21),
];

const OCCUPATION: Marginal = &[
    ("Prof-specialty", 4038),
    ("Craft-repair", 4030),
    ("Exec-managerial", 3992),
    ("Adm-clerical", 3721),
    ("Sales", 3584),
    ("Other-service", 3212),
    ("Machine-op-inspct", 1966),
    ("Transport-moving", 1572),
    ("Handlers-cleaners", 1350),
    ("Farming-fishing", 989),
    ("Tech-support", 912),
    ("Protective-serv", 644),
    ("Priv-house-serv", 143),
    ("Armed-Forces", 9),
];

const RACE: Marginal =
    &[("White", 25933), ("Black", 2817), ("Asian-Pac-Islander", 895), ("Amer-Indian-Eskimo", 286), ("Other", 231)];

const SEX: Marginal = &[("Male", 20380), ("Female", 9782)];

const COUNTRY: Marginal = &[
    ("United-States", 27504),
    ("Mexico", 610),
    ("Philippines", 188),
    ("Germany", 128),
    ("Puerto-Rico", 109),
    ("Canada", 107),
    ("India", 100),
    ("El-Salvador", 100),
    ("Cuba", 92),
    ("England", 86),
    ("Jamaica", 80),
    ("South", 71),
    ("China", 68),
    ("Italy", 68),
    ("Dominican-Republic", 67),
    ("Vietnam", 64),
    ("Guatemala", 63),
    ("Japan", 59),
    ("Poland", 56),
    ("Columbia", 56),
    ("Iran", 42),
    ("Taiwan", 42),
    ("Haiti", 42),
    ("Portugal", 34),
    ("Nicaragua", 33),
    ("Peru", 30),
    ("Greece", 29),
    ("France", 27),
    ("Ecuador", 27),
    ("Ireland", 24),
    ("Hong", 19),
    ("Cambodia", 18),
    ("Trinadad&Tobago", 18),
    ("Laos", 17),
    ("Thailand", 17),
    ("Yugoslavia", 16),
    ("Outlying-US(Guam-USVI-etc)", 14),
    ("Hungary", 13),
    ("Honduras", 12),
    ("Scotland", 11),
    ("Holand-Netherlands", 1),
];

const SALARY: Marginal = &[("<=50K", 22654), (">50K", 7508)];

/// Ages 17 to 90 except 87 and 89, which do not occur in the extract.
fn ages() -> Vec<i64> {
    (17..=90).filter(|a| *a != 87 && *a != 89).collect()
}

fn age_weight(a: i64) -> f64 {
    // right-skewed bump peaking in the mid thirties
    let x = (a - 17) as f64;
    x.powf(1.3) * (-x / 14.0).exp() + 0.02
}

pub fn adults_schema() -> Schema {
    ADULTS_SCHEMA.parse().expect("static schema")
}

/// `n` distinct tuples over the census domain, drawn from independent skewed
/// marginals. Every value of every attribute occurs at least once, so the
/// active domain has 72 * 7 * 16 * 7 * 14 * 5 * 2 * 41 * 2 = 648023040 cells.
///
/// Panics if `n` is below 72, the number of ages.
pub fn adults_surrogate(n: usize, seed: u64) -> Relation {
    let ages = ages();
    assert!(n >= ages.len(), "need at least {} tuples to cover every age", ages.len());
    let cats = [WORKCLASS, EDUCATION, MARITAL, OCCUPATION, RACE, SEX, COUNTRY, SALARY];
    let schema = adults_schema();
    debug_assert!(schema.attributes()[1..].iter().all(|a| a.kind == AttrKind::Categorical));
    let mut r = Relation::new(schema);
    for (i, &age) in ages.iter().enumerate() {
        let mut vals = vec![Value::Int(age)];
        vals.extend(cats.iter().map(|m| Value::from(m[i % m.len()].0)));
        r.insert(Tuple::new(vals)).expect("surrogate tuple fits schema");
    }
    let mut rng = stream_rng(seed, 0);
    let age_dist = WeightedIndex::new(ages.iter().map(|&a| age_weight(a))).expect("positive weights");
    let cat_dists: Vec<WeightedIndex<u32>> =
        cats.iter().map(|m| WeightedIndex::new(m.iter().map(|x| x.1)).expect("positive weights")).collect();
    while r.len() < n {
        let mut vals = vec![Value::Int(ages[age_dist.sample(&mut rng)])];
        vals.extend(cats.iter().zip(&cat_dists).map(|(m, d)| Value::from(m[d.sample(&mut rng)].0)));
        r.insert(Tuple::new(vals)).expect("surrogate tuple fits schema");
    }
    r
}
