"""Synthetic spear-phishing fixture generation over an abstract text-generation client.

The chain is interests -> (organization, activity) pairs per interest -> one
email per pair.  Every generated message is watermarked with
``X-SpearMail-Synthetic: true``, carries only ``example.invalid`` links and a
random ``.invalid`` sender, so the output is usable as detector test data and
nothing else.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from email.message import EmailMessage
from email.utils import formataddr
from pathlib import Path

__all__ = [
    "PROMPTS",
    "CUES",
    "SYNTHETIC_HEADER",
    "ClientError",
    "ProfileSpec",
    "GeneratedEmail",
    "GenerationPlan",
    "MockClient",
    "AdapterClient",
    "MockJudge",
    "PersuasionScore",
    "render_prompt",
    "generate_plan",
    "score_persuasion",
    "compare_persuasion",
    "write_maildir",
    "load_profiles",
]

PROMPTS = {
    "interest_inference": (
        "Given the list of information about an individual: {profile}. "
        "Please analyze the information, and give me {m} unique interests they might have, "
        "along with where you obtained this interest from."
    ),
    "activity_inference": (
        "I am a professional trying to connect an individual who has certain interests to a few "
        "organizations. Given the individual's interest: {interest}, help me generate {n} unique "
        "organization-activities pairs that are related to this interest, and would be something "
        "that this individual would participate in. The organization must be real."
    ),
    "email_generation": (
        "Given his profile: {profile}, interest: {interest}, write him an email about this "
        "activity with your identity as: {activity_org}."
    ),
}

JUDGE_PROMPT = (
    "You are rating an email for persuasion cues. Recipient profile: {profile}\n"
    "Email:\n{email}\n"
    "Score each cue from 1 (absent) to 5 (very strong) and answer with one line per cue "
    "in the form 'Cue: score' for: Reciprocity, Consistency, Social Proof, Authority, Liking, Scarcity."
)

CUES = ("Reciprocity", "Consistency", "Social Proof", "Authority", "Liking", "Scarcity")
SYNTHETIC_HEADER = "X-SpearMail-Synthetic"
PLACEHOLDER_HOST = "example.invalid"
_URL_RE = re.compile(r"(?:https?://|www\.)[^\s<>\"')\]]+", re.I)


class ClientError(RuntimeError):
    """Generation or judge backend failed, or its reply could not be used."""


def render_prompt(stage: str, **slots) -> str:
    return PROMPTS[stage].format(**slots)


@dataclass(frozen=True)
class ProfileSpec:
    profile_text: str
    m: int = 6
    n: int = 5

    def __post_init__(self):
        if int(self.m) < 1 or int(self.n) < 1:
            raise ValueError("m and n must both be at least 1")
        if not self.profile_text.strip():
            raise ValueError("empty profile")


@dataclass(frozen=True)
class GeneratedEmail:
    interest_index: int
    activity_index: int
    interest: str
    organization: str
    activity: str
    subject: str
    sender: str
    body: str
    verified_organization: bool = False

    def to_message(self, recipient: str = f"recipient@{PLACEHOLDER_HOST}") -> EmailMessage:
        msg = EmailMessage()
        msg["From"] = formataddr((self.organization, self.sender))
        msg["To"] = recipient
        msg["Subject"] = self.subject
        msg[SYNTHETIC_HEADER] = "true"
        msg["X-SpearMail-Pair"] = f"{self.interest_index}.{self.activity_index}"
        msg.set_content(self.body)
        return msg

    def to_bytes(self) -> bytes:
        return bytes(self.to_message())


@dataclass
class GenerationPlan:
    spec: ProfileSpec
    interests: list = field(default_factory=list)
    activities: list = field(default_factory=list)  # per interest: [(organization, activity), ...]
    emails: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # ("stage", index, message)

    @property
    def complete(self) -> bool:
        return not self.errors and len(self.emails) == self.spec.m * self.spec.n

    def to_dict(self) -> dict:
        return {
            "profile": self.spec.profile_text,
            "m": self.spec.m,
            "n": self.spec.n,
            "interests": list(self.interests),
            "activities": [[list(p) for p in acts] for acts in self.activities],
            "emails": [e.__dict__ for e in self.emails],
            "errors": [list(e) for e in self.errors],
        }


# -- response parsing ---------------------------------------------------------

_ITEM_RE = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s*(.+?)\s*$")


def _items(text: str) -> list[str]:
    items = [m.group(1) for m in map(_ITEM_RE.match, text.splitlines()) if m]
    if not items:
        items = [line.strip() for line in text.splitlines() if line.strip()]
    return items


def _strip_label(s: str, label: str) -> str:
    return re.sub(rf"^\**{label}\**\s*:\s*", "", s.strip(), flags=re.I)


def parse_interests(text: str) -> list[str]:
    out = []
    for item in _items(text):
        head = re.split(r"\s+(?:—|--|\|)\s+|\s*\(source", item, maxsplit=1, flags=re.I)[0]
        head = _strip_label(head, "interest").strip(" *:")
        if head:
            out.append(head)
    return out


def parse_activities(text: str) -> list[tuple[str, str]]:
    out = []
    for item in _items(text):
        parts = [p.strip() for p in re.split(r"\s*\|\s*|\s+(?:—|--)\s+", item) if p.strip()]
        if len(parts) < 2:
            continue
        org = _strip_label(parts[0], "organization")
        act = _strip_label(parts[1], "activity")
        if org and act:
            out.append((org, act))
    return out


# -- clients ------------------------------------------------------------------

_TOPICS = [
    "open-source security tooling", "marathon running", "urban gardening", "machine learning fairness",
    "jazz piano", "amateur astronomy", "chess", "birdwatching", "vintage cameras", "rock climbing",
    "sustainable energy", "medieval history", "sourdough baking", "robotics competitions",
]
_ORGS = [
    "IEEE", "ACM", "USENIX", "Red Cross", "UNICEF", "Stanford University", "NSF", "Black Hat",
    "DEF CON", "GitHub", "Springer Nature", "Royal Astronomical Society", "Audubon Society",
    "World Chess Federation", "Sierra Club",
]
_ACTIVITIES = [
    "annual workshop", "volunteer mentoring program", "community meetup", "research grant call",
    "online webinar series", "summer fellowship", "members-only conference", "regional competition",
    "expert panel", "weekend retreat",
]


def _rng_for(seed, *parts) -> random.Random:
    digest = hashlib.sha256("\x1f".join([str(seed), *map(str, parts)]).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


class MockClient:
    """Deterministic offline backend answering the three prompt shapes.

    ``fail_on`` makes the n-th call (0-based) raise, to exercise partial plans.
    """

    def __init__(self, seed: int = 0, fail_on=()):
        self.seed = seed
        self.fail_on = set(fail_on)
        self.calls = 0
        self.prompts = []

    def complete(self, prompt: str) -> str:
        call = self.calls
        self.calls += 1
        self.prompts.append(prompt)
        if call in self.fail_on:
            raise ClientError(f"mock failure on call {call}")
        rng = _rng_for(self.seed, prompt)
        if m := re.search(r"give me (\d+) unique interests", prompt):
            k = int(m.group(1))
            topics = rng.sample(_TOPICS, min(k, len(_TOPICS)))
            topics += [f"{rng.choice(_TOPICS)} (variant {i})" for i in range(k - len(topics))]
            return "\n".join(f"{i + 1}. {t} -- source: stated in the profile" for i, t in enumerate(topics))
        if m := re.search(r"generate (\d+) unique organization-activities", prompt):
            k = int(m.group(1))
            return "\n".join(
                f"{i + 1}. Organization: {rng.choice(_ORGS)} | Activity: {rng.choice(_ACTIVITIES)} {i + 1}"
                for i in range(k)
            )
        if "write him an email" in prompt:
            interest = re.search(r"interest: (.*?), write him", prompt, re.S)
            who = re.search(r"identity as: (.*?)\.\s*$", prompt, re.S)
            interest = interest.group(1) if interest else "your interests"
            who = who.group(1) if who else "our organization"
            return (
                f"Dear colleague,\n\nGiven your passion for {interest}, we would love to see you at "
                f"{who}. Seats are limited and several of your peers have already registered.\n\n"
                f"Please register at https://register.{rng.randrange(10 ** 6)}.example/now before Friday.\n\n"
                f"Kind regards,\nThe organizing team"
            )
        return "3"


class AdapterClient:
    """Bridge to any provider via the JSON-lines adapter: ``{"prompt"}`` -> ``{"text"}``."""

    def __init__(self, client, deadline: float | None = 60.0):
        self.client = client
        self.deadline = deadline

    def complete(self, prompt: str) -> str:
        from refmail.adapter import AdapterError

        try:
            reply = self.client.request({"prompt": prompt}, deadline=self.deadline)
        except AdapterError as exc:
            raise ClientError(str(exc)) from exc
        text = reply.get("text")
        if not isinstance(text, str):
            raise ClientError("reply has no 'text' string")
        return text


def _call(client, prompt, retries):
    last = None
    for _ in range(retries + 1):
        try:
            return client.complete(prompt)
        except Exception as exc:  # any backend failure counts against the budget
            last = exc
    raise ClientError(str(last)) from last


def _random_sender(rng, kb=None) -> str:
    taken = kb.all_domains() if kb is not None else frozenset()
    while True:
        local = "".join(rng.choices(string.ascii_lowercase + string.digits, k=8))
        host = "".join(rng.choices(string.ascii_lowercase, k=10)) + ".invalid"
        if host not in taken:
            return f"{local}@{host}"


def _sanitize_links(body: str, rng) -> str:
    return _URL_RE.sub(lambda _: f"https://{PLACEHOLDER_HOST}/{rng.randrange(16 ** 8):08x}", body)


def _subject(activity: str, organization: str) -> str:
    return f"Invitation: {activity[:1].upper() + activity[1:]} with {organization}"


def generate_plan(spec: ProfileSpec, client, *, kb=None, seed: int = 0, retries: int = 0,
                  max_inflight: int = 1) -> GenerationPlan:
    """Run the interest -> activity -> email chain for one profile.

    A failing call is retried ``retries`` times; after that the affected part
    of the plan is skipped and recorded in ``plan.errors``.
    """
    plan = GenerationPlan(spec)
    try:
        text = _call(client, render_prompt("interest_inference", profile=spec.profile_text, m=spec.m), retries)
        plan.interests = parse_interests(text)[:spec.m]
    except ClientError as exc:
        plan.errors.append(("interest_inference", None, str(exc)))
        return plan
    if len(plan.interests) < spec.m:
        plan.errors.append(("interest_inference", None, f"got {len(plan.interests)} of {spec.m} interests"))

    for i, interest in enumerate(plan.interests):
        try:
            text = _call(client, render_prompt("activity_inference", interest=interest, n=spec.n), retries)
            pairs = parse_activities(text)[:spec.n]
        except ClientError as exc:
            plan.errors.append(("activity_inference", i, str(exc)))
            pairs = []
        if len(pairs) < spec.n and not (plan.errors and plan.errors[-1][1] == i):
            plan.errors.append(("activity_inference", i, f"got {len(pairs)} of {spec.n} pairs"))
        plan.activities.append(pairs)

    jobs = [(i, j, plan.interests[i], org, act)
            for i, pairs in enumerate(plan.activities) for j, (org, act) in enumerate(pairs)]

    def run(job):
        i, j, interest, org, act = job
        prompt = render_prompt("email_generation", profile=spec.profile_text, interest=interest,
                               activity_org=f"{org}, {act}")
        try:
            return job, _call(client, prompt, retries), None
        except ClientError as exc:
            return job, None, str(exc)

    if max_inflight > 1:
        with ThreadPoolExecutor(max_workers=max_inflight) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    for (i, j, interest, org, act), body, error in results:
        if error is not None:
            plan.errors.append(("email_generation", (i, j), error))
            continue
        rng = _rng_for(seed, spec.profile_text, i, j)
        verified = kb is not None and kb.resolve_alias(org) is not None
        plan.emails.append(GeneratedEmail(
            i, j, interest, org, act, _subject(act, org), _random_sender(rng, kb),
            _sanitize_links(body, rng), verified,
        ))
    return plan


def write_maildir(plans, path) -> list[Path]:
    """Write every email of ``plans`` into a maildir at ``path`` (``new/`` subfolder)."""
    root = Path(path)
    for sub in ("tmp", "new", "cur"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    written = []
    for p, plan in enumerate(plans):
        for e in plan.emails:
            target = root / "new" / f"spearmail.{p:04d}.{e.interest_index:02d}.{e.activity_index:02d}:2,"
            target.write_bytes(e.to_bytes())
            written.append(target)
    return written


def load_profiles(path, m: int = 6, n: int = 5) -> list[ProfileSpec]:
    """JSON-lines ``{"profile", "m"?, "n"?}`` records, or a plain-text file holding one profile."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if lines and all(line.lstrip().startswith("{") for line in lines):
        out = []
        for line in lines:
            obj = json.loads(line)
            out.append(ProfileSpec(obj["profile"], int(obj.get("m", m)), int(obj.get("n", n))))
        return out
    return [ProfileSpec(text.strip(), m, n)]


# -- persuasion scoring ---------------------------------------------------------


@dataclass(frozen=True)
class PersuasionScore:
    reciprocity: int
    consistency: int
    social_proof: int
    authority: int
    liking: int
    scarcity: int
    diagnostics: tuple = ()

    def values(self) -> tuple:
        return (self.reciprocity, self.consistency, self.social_proof,
                self.authority, self.liking, self.scarcity)

    def as_dict(self) -> dict:
        return dict(zip(CUES, self.values()))


def _parse_scores(text: str):
    labelled = {}
    for cue in CUES:
        m = re.search(rf"{cue}\W*?(-?\d+)", text, re.I)
        if m:
            labelled[cue] = int(m.group(1))
    if len(labelled) == len(CUES):
        return [labelled[c] for c in CUES]
    nums = [int(x) for x in re.findall(r"-?\d+", text)]
    if len(nums) >= len(CUES):
        return nums[:len(CUES)]
    return None


def score_persuasion(profile: str, email: str, judge, retries: int = 2) -> PersuasionScore:
    """Ask ``judge`` for six 1-5 cue scores; out-of-range values are clamped with a diagnostic."""
    prompt = JUDGE_PROMPT.format(profile=profile, email=email)
    problems = []
    for _ in range(retries + 1):
        try:
            reply = judge.complete(prompt)
        except Exception as exc:
            problems.append(f"judge failure: {exc}")
            continue
        raw = _parse_scores(reply)
        if raw is None:
            problems.append(f"unparseable judge reply: {reply[:80]!r}")
            continue
        diags = []
        vals = []
        for cue, v in zip(CUES, raw):
            c = min(5, max(1, v))
            if c != v:
                diags.append(f"{cue} score {v} clamped to {c}")
            vals.append(c)
        return PersuasionScore(*vals, diagnostics=tuple(diags))
    raise ClientError("; ".join(problems) or "judge gave no answer")


_CUE_WORDS = {
    "Reciprocity": ("free", "gift", "complimentary", "in return", "offer"),
    "Consistency": ("as you", "your passion", "continue", "again", "previous"),
    "Social Proof": ("peers", "others", "many", "already registered", "join"),
    "Authority": ("committee", "official", "department", "director", "university"),
    "Liking": ("dear", "love", "admire", "appreciate", "kind"),
    "Scarcity": ("limited", "before", "deadline", "only", "expires"),
}


class MockJudge:
    """Offline judge: ``fixed`` reply if given, else keyword counts mapped onto 1-5."""

    def __init__(self, fixed: str | None = None):
        self.fixed = fixed

    def complete(self, prompt: str) -> str:
        if self.fixed is not None:
            return self.fixed
        email = prompt.split("Email:\n", 1)[-1].lower()
        return "\n".join(
            f"{cue}: {min(5, 1 + sum(w in email for w in words))}" for cue, words in _CUE_WORDS.items()
        )


def compare_persuasion(profile: str, generated, generic, judge, retries: int = 2) -> dict:
    """Mean cue scores of two email sets, side by side."""
    def means(emails):
        scores = [score_persuasion(profile, e, judge, retries).values() for e in emails]
        if not scores:
            return {c: None for c in CUES}
        return {c: sum(s[k] for s in scores) / len(scores) for k, c in enumerate(CUES)}

    return {"generated": means(list(generated)), "generic": means(list(generic))}
