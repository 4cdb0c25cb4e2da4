#!/usr/bin/env python3
"""Builds the scripted reconstruction of the datacenter social-engineering case study.

Published material is used verbatim where it exists: the guide's advice, the
personas, the initial criteria, the selected tree, Dr. Chen's matrix and the
example prompts. Everything the case study does not publish is synthesized here
and labelled as such in fixtures/paper/README.md:

  * ballots (only the winners are published) -- totals are chosen so the
    published selections win in their published order;
  * the sub-criteria and alternatives other experts proposed;
  * every individual pairwise matrix. Top-level matrices are fitted so their
    geometric aggregate approximates the published aggregated matrix; sub-criteria
    and alternative matrices are fitted to the published global priorities and
    final scores.

Outputs (fixtures/paper/): script.json, paper.ini, replay.ini, cost_session.json.
The recorded session and transcript come from running the CLI on paper.ini;
see fixtures/generate/regenerate.sh.
"""

import json
import math
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "paper"
RNG = np.random.default_rng(20240211)

GOAL = "Secure the Corporate Datacenter from Social Engineering Attacks"

SAATY = [1 / 9, 1 / 8, 1 / 7, 1 / 6, 1 / 5, 1 / 4, 1 / 3, 1 / 2, 1, 2, 3, 4, 5, 6, 7, 8, 9]
LOG_SAATY = np.log(SAATY)

# --- published material -------------------------------------------------------

ADVICE_EXPERTS = (
    "Choosing the panel size is a trade-off between coverage of the relevant disciplines and the effort of "
    "collecting and aggregating judgments.\n\nIn summary, for a decision as critical as securing a corporate "
    "datacenter, a group of 5-7 experts from key areas would be a good balance."
)
ADVICE_LEVELS = (
    "Given the goal of securing a datacenter against social engineering attacks, a two-level structure is often "
    "optimal. It allows for sufficient detail and specificity without becoming overly complicated."
)

PERSONAS_REPLY = """Cybersecurity Strategist, Dr. Ava Chen:

Background: With a Ph.D. in Cybersecurity and over 15 years of experience in cyber defense strategies, Dr. Chen has a deep understanding of various cybersecurity threats, including social engineering.

Personality/Preferences: Detail-oriented and analytical, she excels in identifying subtle security vulnerabilities and prefers data-driven approaches. Dr. Chen will be instrumental in defining criteria related to technical security measures and evaluating alternatives for effectiveness.

Senior IT Infrastructure Architect, Michael Rodriguez:

Background: Michael specializes in designing secure IT infrastructures. His 20 years in the field give him a thorough understanding of the technical aspects of datacenter operations.

Personality/Preferences: A problem-solver who enjoys exploring innovative solutions, Michael will contribute significantly to identifying and evaluating alternatives that involve technical infrastructure enhancements.

Organizational Psychologist, Dr. Yara Singh:

Background: Dr. Singh's expertise lies in human behavior in the workplace. Her research on social engineering vulnerabilities within corporate environments is widely respected.

Personality/Preferences: Known for her empathetic and intuitive nature, she is adept at understanding human factors in security and will provide invaluable insights into criteria and alternatives related to employee training and awareness programs.

Legal and Compliance Officer, Edward Kim:

Background: Edward has extensive experience in corporate law, with a focus on compliance and data privacy regulations.

Personality/Preferences: As a meticulous and thorough professional, he is well-suited to advise on legal and compliance-related criteria, ensuring that the chosen security measures adhere to legal standards.

Chief Risk Officer, Anita Patel:

Background: Anita has a strong background in risk management and mitigation strategies in large corporations.

Personality/Preferences: Her strategic and forward-thinking approach will be crucial in evaluating the long-term risks and benefits of each alternative, especially in relation to financial and reputational impacts.

Physical Security Expert, Lt. Col. John Abrams (Retd.):

Background: With a military background and experience in corporate physical security, he understands the importance of securing physical access to sensitive areas.

Personality/Preferences: His practical and no-nonsense approach will ground the discussion in realistic, enforceable physical security measures.

Vendor Management Specialist, Laura García:

Background: Laura specializes in managing relationships with third-party vendors and has a keen understanding of the security risks associated with external entities.

Personality/Preferences: Her collaborative and communicative style is effective in discussions about managing external risks and integrating vendor-related security considerations into the overall strategy.
"""

# Panel order is the guide's order.
EXPERTS = ["dr-ava-chen", "michael-rodriguez", "dr-yara-singh", "edward-kim", "anita-patel",
           "lt-col-john-abrams", "laura-garcia"]
CHEN = "dr-ava-chen"

INITIAL_CRITERIA = {
    "dr-ava-chen": ["Employee Training", "Access Control", "Communication Protocols", "Incident Response",
                    "Physical Security", "Policy Enforcement", "Monitoring Systems"],
    "michael-rodriguez": ["System Redundancies", "Database Security", "Cloud Infrastructure Security",
                          "Hardware Integrity", "Software Updates", "Server Access Control", "Network Segmentation"],
    "dr-yara-singh": ["Employee Training Programs", "Behavior Analysis", "Social Engineering Awareness",
                      "Psychological Profiling", "Insider Threat Monitoring", "Communication Protocols",
                      "Staff Vigilance"],
    "laura-garcia": ["Vendor Risk Assessment", "Third-party Audits", "Supply Chain Security",
                     "Service Level Agreements", "External Collaboration Security", "Information Sharing Policies",
                     "Outsourcing Management"],
    "edward-kim": ["Regulatory Compliance", "Legal Risk Assessment", "Policy Development", "Contractual Safeguards",
                   "Audit Trails", "Reporting Mechanisms", "Intellectual Property Protection"],
    "anita-patel": ["Risk Management Framework", "Business Continuity", "Disaster Recovery Planning",
                    "Financial Impact Analysis", "Strategic Risk Evaluation", "Operational Risk Controls",
                    "Compliance Risk Management"],
    "lt-col-john-abrams": ["Physical Access Controls", "Surveillance Systems", "Security Personnel Training",
                           "Entry Point Security", "Emergency Response", "Visitor Management",
                           "Environmental Controls"],
}

# Near-duplicates the case study removed; only "Communication Protocols" repeats verbatim.
ALIASES = [("Employee Training", "Employee Training Programs"),
           ("Physical Security", "Physical Access Controls"),
           ("Access Control", "Physical Access Controls")]

TREE = [
    ("Social Engineering Awareness", 0.120,
     ["Training Program Effectiveness", "Awareness Session Regularity", "Incident Reporting Protocol"]),
    ("Physical Access Controls", 0.131,
     ["Biometric System Reliability", "Visitor Tracking System", "Access Point Monitoring"]),
    ("Audit Trails", 0.099, ["Log Analysis Accuracy", "Audit Frequency", "Anomaly Tracking Efficiency"]),
    ("Behavior Analysis", 0.096, ["User Behavior Monitoring", "Response to Anomalies", "Activity Pattern Analysis"]),
    ("Operational Risk Controls", 0.126,
     ["Infrastructure Vulnerability Check", "Data Redundancy Systems", "Emergency Protocol Effectiveness"]),
    ("Psychological Profiling", 0.164, ["Staff Behavior Assessment", "Risk Behavior Profiling", "Continuous Observation"]),
    ("Service Level Agreements", 0.264,
     ["Response Time Commitment", "Data Privacy Assurance", "Breach Penalty Specification"]),
]
PARENTS = [p for p, _, _ in TREE]
LEAVES = [s for _, _, subs in TREE for s in subs]

GLOBALS = {
    "Response Time Commitment": 0.1127, "Data Privacy Assurance": 0.0866, "Staff Behavior Assessment": 0.0655,
    "Breach Penalty Specification": 0.0644, "Infrastructure Vulnerability Check": 0.0573,
    "Risk Behavior Profiling": 0.0546, "Biometric System Reliability": 0.0502,
    "Training Program Effectiveness": 0.0485, "Continuous Observation": 0.0440, "Visitor Tracking System": 0.0434,
    "Audit Frequency": 0.0385, "Data Redundancy Systems": 0.0384, "User Behavior Monitoring": 0.0378,
    "Access Point Monitoring": 0.0375, "Incident Reporting Protocol": 0.0368, "Awareness Session Regularity": 0.0347,
    "Response to Anomalies": 0.0340, "Log Analysis Accuracy": 0.0317, "Emergency Protocol Effectiveness": 0.0302,
    "Anomaly Tracking Efficiency": 0.0288, "Activity Pattern Analysis": 0.0242,
}

# Final alternatives in the order the case study lists them, with their final scores.
ALTERNATIVES = ["Cloud-Based Data Backup Solutions", "Physical Barrier Reinforcement",
                "Security Personnel Training Update", "Comprehensive Employee Training Programs",
                "Advanced Intrusion Detection Systems"]
FINAL_SCORES = [0.1938, 0.1254, 0.1795, 0.2774, 0.2240]

TABLE1_UPPER = [
    [None, 1.319, 1.104, 1.483, 1.081, 0.498, 0.369],
    [None, None, 1.673, 1.560, 1.029, 0.937, 0.408],
    [None, None, None, 1.251, 0.701, 0.756, 0.325],
    [None, None, None, None, 0.627, 0.801, 0.503],
    [None, None, None, None, None, 0.604, 0.526],
    [None, None, None, None, None, None, 0.652],
]

TABLE2 = {(0, 1): 2.0, (0, 2): 3.0, (1, 2): 2.0}
TABLE2_RATIONALE = (
    "Rationale: The effectiveness of training programs is paramount as it directly impacts employees' ability to "
    "recognize and respond to social engineering attacks. Regular sessions ensure ongoing vigilance, while robust "
    "reporting protocols are crucial for timely response and mitigation."
)

# --- synthesized proposals ----------------------------------------------------

# Sub-criteria proposed by the other six experts, three per parent, in panel order.
OTHER_SUBS = {
    "Social Engineering Awareness": [
        "Phishing Simulation Results", "Technical Lure Detection", "Helpdesk Verification Steps",
        "Security Culture Index", "Pretexting Recognition Skills", "Employee Engagement Level",
        "Policy Acknowledgment Rate", "Legal Awareness Coverage", "Consent Training Records",
        "Awareness Risk Metrics", "Executive Briefing Cadence", "Human Error Rate",
        "Tailgating Awareness Drills", "Badge Sharing Prevention", "Guard Alertness Checks",
        "Vendor Staff Briefings", "Contractor Onboarding Training", "Partner Awareness Coverage"],
    "Physical Access Controls": [
        "Door Controller Security", "Access System Uptime", "Credential Database Protection",
        "Piggybacking Deterrence Culture", "Badge Display Compliance", "Guard Interaction Quality",
        "Access Policy Compliance", "Entry Record Retention", "Privacy of Biometrics",
        "Perimeter Breach Likelihood", "Access Control Costs", "Zone Criticality Mapping",
        "Mantrap Effectiveness", "Perimeter Fence Integrity", "Guard Patrol Coverage",
        "Vendor Access Scheduling", "Contractor Badge Expiry", "Delivery Entry Screening"],
    "Audit Trails": [
        "Log Storage Integrity", "Centralized Log Collection", "Time Synchronization Accuracy",
        "Reviewer Attention Span", "Alert Fatigue Management", "Audit Feedback Loop",
        "Regulatory Log Retention", "Evidence Chain Custody", "Audit Report Completeness",
        "Audit Coverage Ratio", "Finding Remediation Speed", "Control Testing Depth",
        "Physical Entry Logs", "Guard Logbook Accuracy", "Camera Footage Retention",
        "Vendor Activity Logging", "Third-Party Audit Rights", "Partner Log Sharing"],
    "Behavior Analysis": [
        "Login Pattern Baselines", "Endpoint Telemetry Coverage", "Analytics Platform Scalability",
        "Stress Indicator Tracking", "Social Interaction Patterns", "Trust Exploitation Signals",
        "Monitoring Privacy Compliance", "Employee Consent Management", "Proportionality Review Process",
        "Insider Risk Scoring", "False Positive Rate", "Escalation Threshold Tuning",
        "Unusual Presence Detection", "After-Hours Access Review", "Loitering Detection Rules",
        "Vendor Behavior Baselines", "Contractor Session Review", "External Account Anomalies"],
    "Operational Risk Controls": [
        "Failover Capacity Testing", "Configuration Drift Detection", "Change Management Rigor",
        "Staff Workload Balance", "Procedural Compliance Culture", "Human Factors Review",
        "Control Documentation Quality", "Regulatory Control Mapping", "Liability Exposure Review",
        "Risk Appetite Alignment", "Key Risk Indicators", "Loss Event Tracking",
        "Physical Hazard Controls", "Power Supply Resilience", "Fire Suppression Readiness",
        "Vendor Continuity Plans", "Outsourced Process Oversight", "Supplier Concentration Risk"],
    "Psychological Profiling": [
        "Profiling Tool Accuracy", "Data Source Integration", "Profile Update Frequency",
        "Manipulation Susceptibility Mapping", "Personality Risk Factors", "Cognitive Bias Awareness",
        "Profiling Legal Boundaries", "Discrimination Risk Review", "Data Minimization Practice",
        "Profile Risk Weighting", "High-Risk Role Coverage", "Profiling Cost Efficiency",
        "Guard Vetting Depth", "Security Clearance Reviews", "Background Check Renewal",
        "Vendor Staff Screening", "Contractor Vetting Standards", "Partner Personnel Checks"],
    "Service Level Agreements": [
        "Uptime Guarantee Levels", "Recovery Time Objectives", "Technical Support Availability",
        "Vendor Communication Quality", "Escalation Contact Clarity", "Relationship Trust Level",
        "Liability Cap Terms", "Audit Right Clauses", "Jurisdiction and Governance",
        "Penalty Cost Coverage", "Risk Transfer Terms", "Performance Metric Reporting",
        "Onsite Guard Staffing", "Physical Security Obligations", "Incident Escalation Timeline",
        "Security Clause Coverage", "Subcontractor Flow-Down Terms", "Termination Exit Provisions"],
}

PROPOSED_ALTERNATIVES = {
    "dr-ava-chen": ["Advanced Intrusion Detection Systems", "Multi-Factor Authentication Rollout",
                    "Security Awareness Gamification", "Zero Trust Network Architecture",
                    "Phishing Simulation Campaigns"],
    "michael-rodriguez": ["Cloud-Based Data Backup Solutions", "Network Access Segmentation",
                          "Hardware Security Modules", "Automated Patch Management",
                          "Privileged Access Workstations"],
    "dr-yara-singh": ["Comprehensive Employee Training Programs", "Behavioral Nudging Campaigns",
                      "Peer Security Champions Network", "Stress-Aware Workload Policies",
                      "Insider Risk Counseling Program"],
    "edward-kim": ["Updated Security Policy Framework", "Contractual Security Clauses", "Compliance Audit Program",
                   "Data Classification Scheme", "Whistleblower Reporting Channel"],
    "anita-patel": ["Cyber Insurance Coverage", "Enterprise Risk Dashboard", "Business Continuity Drills",
                    "Third-Party Risk Scoring", "Security Investment Roadmap"],
    "lt-col-john-abrams": ["Physical Barrier Reinforcement", "Security Personnel Training Update",
                           "Mantrap Entry Installation", "CCTV Coverage Expansion", "Visitor Escort Policy"],
    "laura-garcia": ["Vendor Security Certification", "Supplier Access Reviews", "Shared Incident Playbooks",
                     "Vendor Offboarding Procedures", "Secure Partner Portal"],
}

# Which alternatives suit which leaves (used to spread the per-leaf priorities).
LEAF_AFFINITY = {
    "Training Program Effectiveness": [3, 4], "Awareness Session Regularity": [3],
    "Incident Reporting Protocol": [3, 4], "Biometric System Reliability": [1, 4],
    "Visitor Tracking System": [1, 2], "Access Point Monitoring": [1, 2],
    "Log Analysis Accuracy": [4], "Audit Frequency": [0, 4], "Anomaly Tracking Efficiency": [4],
    "User Behavior Monitoring": [3, 4], "Response to Anomalies": [2, 4], "Activity Pattern Analysis": [4],
    "Infrastructure Vulnerability Check": [0, 4], "Data Redundancy Systems": [0],
    "Emergency Protocol Effectiveness": [0, 2], "Staff Behavior Assessment": [3],
    "Risk Behavior Profiling": [3, 2], "Continuous Observation": [2, 4],
    "Response Time Commitment": [0, 4], "Data Privacy Assurance": [0], "Breach Penalty Specification": [0, 3],
}

# --- judgment synthesis -------------------------------------------------------


RI = {3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32}
ONE = SAATY.index(1)


def consistency_ratio(m):
    n = m.shape[0]
    w = priorities(m)
    lam = float(np.mean((m @ w) / w))
    return (lam - n) / (n - 1) / RI[n]


def nearest(log_ratio):
    return int(np.argmin(np.abs(LOG_SAATY - log_ratio)))


def to_matrix(idx):
    """Upper-triangle Saaty indices -> full reciprocal matrix."""
    up = np.triu(LOG_SAATY[idx], 1)
    return np.exp(up - up.T)


def fit_matrices(target, latent, frozen=None, iters=30000, weight=1e4, mu=40.0):
    """Seven expert matrices whose geometric aggregate lands on target (an
    n x n matrix, only the upper triangle is used) while every expert stays
    consistent. Each expert starts from its own latent weights rounded to the
    Saaty scale; annealing then trades aggregate error against expert CR.
    frozen = (k, {(i, j): value}) pins one expert's judgments."""
    n = target.shape[0]
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    t = np.log(target)
    idx = np.full((7, n, n), ONE, dtype=int)
    for k in range(7):
        for i, j in cells:
            idx[k, i, j] = nearest(math.log(latent[k][i] / latent[k][j]))
    movable = list(range(7))
    if frozen is not None:
        k0, vals = frozen
        for (i, j), v in vals.items():
            idx[k0, i, j] = SAATY.index(v)
        movable.remove(k0)

    mean = {c: LOG_SAATY[idx[:, c[0], c[1]]].mean() for c in cells}
    crs = [consistency_ratio(to_matrix(idx[k])) for k in range(7)]

    def cost_of(cell_mean, cr_list):
        return weight * sum((cell_mean[c] - t[c]) ** 2 for c in cells) + mu * sum(cr_list)

    cost = cost_of(mean, crs)
    temp0 = 2.0
    for it in range(iters):
        temp = temp0 * (1 - it / iters) + 1e-3
        k = movable[RNG.integers(len(movable))]
        c = cells[RNG.integers(len(cells))]
        step = int(RNG.choice((-1, 1)))
        old = idx[k][c]
        new = old + step
        if new < 0 or new >= len(SAATY):
            continue
        idx[k][c] = new
        new_cr = consistency_ratio(to_matrix(idx[k]))
        new_mean = mean[c] + (LOG_SAATY[new] - LOG_SAATY[old]) / 7
        delta = weight * ((new_mean - t[c]) ** 2 - (mean[c] - t[c]) ** 2) + mu * (new_cr - crs[k])
        if new_cr < max(0.1, crs[k]) and (delta <= 0 or RNG.random() < math.exp(-delta / temp)):
            mean[c] = new_mean
            crs[k] = new_cr
            cost += delta
        else:
            idx[k][c] = old
    return [to_matrix(idx[k]) for k in range(7)]


def latent_weights(base, sigma):
    base = np.asarray(base, dtype=float)
    return [base * np.exp(sigma * RNG.standard_normal(base.size)) for _ in range(7)]


def fmt(v):
    if v >= 1:
        return str(int(round(v)))
    return "1/" + str(int(round(1 / v)))


def table(labels, m, header=None, corner=""):
    header = header or labels
    lines = ["| " + corner + " | " + " | ".join(header) + " |", "|---" * (len(labels) + 1) + "|"]
    for i, l in enumerate(labels):
        lines.append("| " + l + " | " + " | ".join(fmt(m[i, j]) for j in range(len(labels))) + " |")
    return "\n".join(lines)


def geo_aggregate(ms):
    return np.exp(np.mean([np.log(m) for m in ms], axis=0))


def priorities(a):
    return (a / a.sum(axis=0)).mean(axis=1)


# --- ballots ------------------------------------------------------------------


def split_total(total, n=7):
    """n integer scores in 1..9 summing to total, with some spread."""
    s = [total // n] * n
    for k in range(total - sum(s)):
        s[k] += 1
    for _ in range(12):
        i, j = RNG.integers(0, n, size=2)
        if i != j and s[i] > 1 and s[j] < 9:
            s[i] -= 1
            s[j] += 1
    return s


def ballot_totals(items, winners, top=61, step=2, low=(20, 46)):
    totals = {}
    for rank, w in enumerate(winners):
        totals[w] = top - step * rank
    floor = min(totals.values())
    for it in items:
        if it not in totals:
            totals[it] = int(RNG.integers(low[0], min(low[1], floor - 2) + 1))
    return totals


def ballot_scores(items, winners, **kw):
    totals = ballot_totals(items, winners, **kw)
    per = {it: split_total(totals[it]) for it in items}
    return [{it: per[it][k] for it in items} for k in range(7)]


def ballot_reply(expert, items, scores, noun):
    k = EXPERTS.index(expert)
    if k == 1:
        lines = ["| " + noun.capitalize() + " | Score |", "|---|---|"]
        lines += ["| " + it + " | " + str(scores[it]) + " |" for it in items]
        return "Here are my scores:\n\n" + "\n".join(lines)
    if k == 3:
        return "\n".join(str(i + 1) + ". " + it + " - " + str(scores[it]) for i, it in enumerate(items))
    if k == 5:
        return "Scores:\n" + "\n".join("- **" + it + "**: " + str(scores[it]) + "/9" for it in items)
    return "\n".join(it + ": " + str(scores[it]) for it in items)


# --- script -------------------------------------------------------------------


def numbered(items):
    return "\n".join(str(i + 1) + ". " + it for i, it in enumerate(items))


def build():
    rules = []

    def rule(persona, contains, reply):
        rules.append({"persona": persona, "contains": contains, "reply": reply})

    rule("ahp-guide", ["How many experts"], ADVICE_EXPERTS)
    rule("ahp-guide", ["How many criteria levels"], ADVICE_LEVELS)
    rule("ahp-guide", ["high quality diverse experts"], PERSONAS_REPLY)

    # Criteria proposals: the first expert answers in a sentence, as in the case study.
    for e in EXPERTS:
        items = INITIAL_CRITERIA[e]
        if e == CHEN:
            reply = "Certainly. A comprehensive list of 7 criteria: " + ", ".join(items) + "."
        else:
            reply = "Here are my seven top-level criteria:\n\n" + numbered(items)
        rule(e, ["come up with 7 top-level criteria"], reply)

    # The pool after dedupe, in proposal order (panel order, then list order).
    def canon(s):
        return " ".join(s.lower().replace("-", " ").split())

    alias = {canon(a): canon(b) for a, b in ALIASES}
    proposed = [(it, e) for e in EXPERTS for it in INITIAL_CRITERIA[e]]
    present = {canon(it) for it, _ in proposed}
    pool, seen = [], set()
    for it, _ in proposed:
        c = canon(it)
        if c in alias and alias[c] in present:
            continue
        if c in seen:
            continue
        seen.add(c)
        pool.append(it)
    assert len(proposed) == 49 and len(pool) == 45, (len(proposed), len(pool))
    crit_ballots = ballot_scores(pool, PARENTS)
    for k, e in enumerate(EXPERTS):
        rule(e, ["for each of these 45 criteria:"], ballot_reply(e, pool, crit_ballots[k], "criterion"))

    # Sub-criteria proposals: the first expert proposes the published tree.
    sub_props = {p: {} for p in PARENTS}
    for p, _, subs in TREE:
        sub_props[p][CHEN] = subs
        others = OTHER_SUBS[p]
        for k, e in enumerate(EXPERTS[1:]):
            sub_props[p][e] = others[3 * k:3 * k + 3]
    for e in EXPERTS:
        parts = []
        for i, p in enumerate(PARENTS):
            parts.append(str(i + 1) + ") " + p + ":\n" + "\n".join(
                " " + "abc"[j] + ") " + s for j, s in enumerate(sub_props[p][e])))
        rule(e, ["sub-criteria for each of these criteria:"], "\n\n".join(parts))
    sub_ballots = {}
    for p, _, subs in TREE:
        items = [s for e in EXPERTS for s in sub_props[p][e]]
        assert len(set(map(canon, items))) == 21
        sub_ballots[p] = ballot_scores(items, subs, top=59, step=3)
        for k, e in enumerate(EXPERTS):
            rule(e, ["sub-criteria of " + p + ":"], ballot_reply(e, items, sub_ballots[p][k], "sub-criterion"))

    # Alternatives.
    for e in EXPERTS:
        rule(e, ["alternatives that could achieve our goal"],
             "My five alternatives:\n\n" + numbered(PROPOSED_ALTERNATIVES[e]))
    alt_pool = [a for e in EXPERTS for a in PROPOSED_ALTERNATIVES[e]]
    assert len(set(map(canon, alt_pool))) == 35
    alt_ballots = ballot_scores(alt_pool, ALTERNATIVES, top=60, step=3, low=(18, 44))
    for k, e in enumerate(EXPERTS):
        rule(e, ["for each of these 35 alternatives:"], ballot_reply(e, alt_pool, alt_ballots[k], "alternative"))

    # Top-level matrices: aggregate approaches the published aggregated matrix.
    top_latent = latent_weights([c for _, c, _ in TREE], 0.25)
    t1 = np.ones((7, 7))
    for i in range(7):
        for j in range(i + 1, 7):
            t1[i, j] = TABLE1_UPPER[i][j]
    top_ms = fit_matrices(t1, top_latent)
    agg = geo_aggregate(top_ms)
    worst = max(abs(agg[i, j] - TABLE1_UPPER[i][j]) for i in range(7) for j in range(i + 1, 7))
    short = ["SE Awareness", "Physical Controls", "Audit Trails", "Behavior Analysis", "Operational Risks",
             "Psychological Profiling", "SLAs"]
    for k, e in enumerate(EXPERTS):
        body = table(PARENTS, top_ms[k], header=short if k == 0 else None, corner="Criteria")
        reply = "Top-level criteria pairwise comparison matrix\n\n" + body + \
                "\n\nThe judgments reflect how strongly each criterion contributes to the goal."
        if e == CHEN:
            # First answer breaks reciprocity in one cell; the reminder fixes it.
            bad = top_ms[k].copy()
            bad[6, 0] = 1 / bad[6, 0] if bad[6, 0] != 1 else 2.0
            rule(e, ["Reminder:", "AHP reciprocity"],
                 "Apologies, here is the corrected matrix.\n\n" + body)
            reply = "Top-level criteria pairwise comparison matrix\n\n" + \
                    table(PARENTS, bad, header=short, corner="Criteria") + \
                    "\n\nThe judgments reflect how strongly each criterion contributes to the goal."
        rule(e, ["pairwise comparison matrix for the list of our top-level criteria"], reply)

    # Sub-criteria matrices: aggregate priorities = published globals within each parent.
    sub_ms = {}
    for p, _, subs in TREE:
        local = np.array([GLOBALS[s] for s in subs])
        local = local / local.sum()
        latent = latent_weights(local, 0.2)
        fixed = (0, TABLE2) if p == "Social Engineering Awareness" else None
        sub_ms[p] = fit_matrices(np.outer(local, 1 / local), latent, fixed)
    for start in range(0, 7, 3):
        batch = PARENTS[start:start + 3]
        for k, e in enumerate(EXPERTS):
            parts = []
            for p in batch:
                subs = dict((q, s) for q, _, s in TREE)[p]
                if e == CHEN and p == "Social Engineering Awareness":
                    parts.append("### " + p + "\n\n" + table(subs, sub_ms[p][k], header=[
                        "Training Effectiveness", "Session Regularity", "Reporting Protocol"], corner="Sub-criteria") +
                        "\n\n" + TABLE2_RATIONALE)
                else:
                    parts.append("### " + p + "\n\n" + table(subs, sub_ms[p][k], corner="Sub-criteria"))
            rule(e, ["The tree looks like this", batch[0] + ":\n  - "], "\n\n".join(parts))

    # Alternative matrices: per-leaf vectors v = s + d with sum_leaf g * d = 0,
    # so the published globals recompose the published final scores.
    s = np.array(FINAL_SCORES) / sum(FINAL_SCORES)
    g = np.array([GLOBALS[l] for l in LEAVES])
    g = g / g.sum()
    d = np.zeros((len(LEAVES), 5))
    for li, leaf in enumerate(LEAVES):
        a = np.zeros(5)
        a[LEAF_AFFINITY[leaf]] = 1.0
        d[li] = 0.07 * (a - a.mean()) + 0.01 * RNG.standard_normal(5)
        d[li] -= d[li].mean()
    d -= g @ d  # weighted mean over leaves is now zero for every alternative
    vecs = s + d
    assert (vecs > 0.05).all(), vecs.min()
    alt_ms = {}
    for li, leaf in enumerate(LEAVES):
        latent = latent_weights(vecs[li], 0.15)
        alt_ms[leaf] = fit_matrices(np.outer(vecs[li], 1 / vecs[li]), latent)
    for start in range(0, 21, 3):
        batch = LEAVES[start:start + 3]
        for k, e in enumerate(EXPERTS):
            parts = ["Matrix for " + leaf + ":\n\n" + table(ALTERNATIVES, alt_ms[leaf][k], corner="Alternatives")
                     for leaf in batch]
            rule(e, ["Sub-criteria are: " + batch[0] + ","], "\n\n".join(parts))

    # Synthesized-judgment diagnostics for the README.
    agg_alt = {leaf: priorities(geo_aggregate(alt_ms[leaf])) for leaf in LEAVES}
    scores = sum(GLOBALS[l] * agg_alt[l] for l in LEAVES)
    cr = consistency_ratio
    by_level = {"top": [cr(x) for x in top_ms],
                "sub": [cr(x) for v in sub_ms.values() for x in v],
                "alt": [cr(x) for v in alt_ms.values() for x in v]}
    crs = [c for v in by_level.values() for c in v]
    diag = {
        "table1_upper_max_abs_error": worst,
        "recomposed_scores_with_published_globals": dict(zip(ALTERNATIVES, map(float, scores))),
        "top_aggregate_priorities": list(map(float, priorities(agg))),
        "top_aggregate_cr": cr(agg),
        "sub_aggregate_priorities": {p: list(map(float, priorities(geo_aggregate(v)))) for p, v in sub_ms.items()},
        "expert_matrix_cr_max": max(crs),
        "expert_matrix_cr_median": float(np.median(crs)),
        "expert_matrix_cr_by_level": {k: {"max": max(v), "median": float(np.median(v)),
                                          "above_threshold": sum(c >= 0.1 for c in v)} for k, v in by_level.items()},
        "rules": len(rules),
    }
    return rules, diag


def cost_session():
    """Seven expert conversations of ~5,800 words (4,350 tokens) each plus a
    guide conversation of ~1,200 tokens: the sizes reported in the discussion."""

    def tokens(words):
        return int(math.floor(words * 0.75 + 0.5))

    def conversation(pid, system, target_tokens, exchanges):
        sys_tokens = tokens(len(system.split()))
        remaining = target_tokens - sys_tokens
        msgs = []
        per = remaining // exchanges
        for x in range(exchanges):
            budget = per if x < exchanges - 1 else remaining - per * (exchanges - 1)
            user_words = 40
            expert_tokens = budget - tokens(user_words)
            expert_words = int(round(expert_tokens / 0.75))
            while tokens(expert_words) > expert_tokens:
                expert_words -= 1
            while tokens(expert_words) < expert_tokens:
                expert_words += 1
            msgs.append({"author": "user", "text": " ".join(["request"] * user_words), "tokens": tokens(user_words)})
            msgs.append({"author": "expert", "text": " ".join(["judgment"] * expert_words),
                         "tokens": tokens(expert_words)})
        total = sys_tokens + sum(m["tokens"] for m in msgs)
        assert total == target_tokens, (pid, total)
        return {"persona": pid, "system": system, "system_tokens": sys_tokens, "messages": msgs}

    personas = []
    logs = []
    for e in EXPERTS:
        instr = "You are " + e.replace("-", " ") + ", a member of an expert panel. Answer as this expert."
        personas.append({"id": e, "name": e.replace("-", " ").title(), "title": "", "description": "",
                         "instructions": instr, "role": "expert"})
        logs.append({"archived": [], "active": conversation(e, instr, 4350, 20)})
    guide_instr = "You are the AHP guide. Help the user run the analytic hierarchy process with an expert panel."
    guide = {"archived": [], "active": conversation("ahp-guide", guide_instr, 1200, 3)}
    empty_pool = {"stage": "", "parent": "", "items": [], "removed": []}
    empty_round = {"proposed": empty_pool, "pool": empty_pool, "ballots": [],
                   "tally": {"totals": [], "selected": []}}
    return {
        "schema": "ahp-panel-session", "version": 1,
        "config": {"goal": GOAL, "note": "cost fixture: conversation sizes from the published discussion",
                   "pricing": {"blended_per_1k": 0.10, "per_1k_input": 0.06, "per_1k_output": 0.12},
                   "context": {"budget_tokens": 8192, "rotate_at": 0.9, "tokens_per_word": 0.75}},
        "provenance": {"backend": "synthesized", "templates": ""},
        "completed": "personas",
        "advice": {"warnings": [], "expert_range": [5, 7], "levels": 2},
        "expert_count": 7, "personas": personas,
        "criteria": empty_round, "subcriteria": [], "alternatives": empty_round,
        "tree": {"goal": GOAL, "criteria": [], "alternatives": []},
        "matrices": [], "aggregates": [], "scores": None, "repairs": [], "failures": [],
        "conversations": {"guide": guide, "experts": logs},
    }


CONFIG = """# Reconstruction of the datacenter social-engineering case study.
# Scripted backend: replies come from script.json (see README.md for what is
# published and what is synthesized).

[run]
goal = {goal}
levels = 2
top_criteria = 7
sub_per_criterion = 3
alternatives_per_expert = 5
final_alternatives = 5
aggregation = geometric
cr_threshold = 0.1
strict = false
max_repairs = 2
parallelism = 4
matrix_batch_size = 3

[panel]
skip_advice = false

[backend]
kind = {kind}
{source}

[context]
budget_tokens = 8192
rotate_at = 0.9
tokens_per_word = 0.75

[pricing]
blended_per_1k = 0.10

[aliases]
{aliases}
"""


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rules, diag = build()
    (OUT / "script.json").write_text(json.dumps({"rules": rules}, indent=1, ensure_ascii=False) + "\n")
    aliases = "\n".join(a + " = " + b for a, b in ALIASES)
    (OUT / "paper.ini").write_text(CONFIG.format(goal=GOAL, kind="scripted", source="script = script.json",
                                                 aliases=aliases))
    (OUT / "replay.ini").write_text(CONFIG.format(goal=GOAL, kind="replay", source="transcript = transcript.json",
                                                  aliases=aliases))
    (OUT / "cost_session.json").write_text(json.dumps(cost_session(), indent=1) + "\n")
    (OUT / "synthesis_diagnostics.json").write_text(json.dumps(diag, indent=1) + "\n")
    print(json.dumps(diag, indent=1))


if __name__ == "__main__":
    main()
