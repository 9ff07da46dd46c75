# -*- coding: utf-8

"""Module for the HTTP interface of the permission management system.

Enforcement points post access requests to :code:`/v1/check` and receive
exactly GRANTED or UNAUTHORIZED. Administrative mutations require the static
bearer token of the configuration. Errors are answered with
:code:`{"error": <class name>, "detail": <message>}`.

SPDX-License-Identifier: MIT
"""
import secrets
from typing import List
from typing import Optional

from fastapi import Depends
from fastapi import FastAPI
from fastapi import Header
from fastapi import Query
from fastapi import Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from pydantic import Field

from pmspy import __version__
from pmspy.decisions.decision import AccessRequest
from pmspy.permissions.resource_name import CondValue
from pmspy.permissions.resource_name import format_name
from pmspy.service.system import PermissionService
from pmspy.tools import helpers
from pmspy.tools import logger
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.helpers import BadToken
from pmspy.tools.helpers import MalformedName
from pmspy.tools.helpers import PMSpyError

# checked in order, the first class the error is an instance of wins
ERROR_STATUS = (
    (BadToken, 401),
    (helpers.Unauthorized, 403),
    (helpers.UnknownNode, 404),
    (helpers.UnknownEdge, 404),
    (helpers.UnknownEntry, 404),
    (helpers.UnknownConsumer, 404),
    (helpers.UnknownKey, 404),
    (helpers.PMSpyNameError, 400),
    (helpers.ItemEntry, 400),
    (helpers.ItemEntryInSet, 400),
    (helpers.PMSpyGraphError, 409),
    (helpers.PMSpyAlgebraError, 409),
    (helpers.PMSpyDecisionError, 409),
    (helpers.PMSpyStoreError, 500),
)


def status_for(err):
    """Return the HTTP status code of a PMSpy error."""
    for cls, status in ERROR_STATUS:
        if isinstance(err, cls):
            return status
    return 500


def error_body(err):
    r"""
    Return the JSON body of an error response.

    Messages quote caller supplied names, the outcome word is masked in them
    so that no error body reads like a decision.

    Example
    -------
    >>> from pmspy.service.app import error_body
    >>> from pmspy.tools.helpers import UnknownConsumer
    >>> error_body(UnknownConsumer("Unknown consumer rn:GRANTED:1:user."))
    {'error': 'UnknownConsumer', 'detail': 'Unknown consumer rn:*******:1:user.'}
    """
    detail = str(err).replace(GRANTED, '*' * len(GRANTED))
    return {'error': type(err).__name__, 'detail': detail}


class CheckBody(BaseModel):
    consumer: str
    base: str
    identifier: str
    scope: str
    level: str
    value: Optional[str] = None


class IssueBody(CheckBody):
    action_point: str


class NodeBody(BaseModel):
    key: str
    entries: List[str] = Field(default_factory=list)


class EdgeBody(BaseModel):
    child: str
    parent: str


class EntryBody(BaseModel):
    node: str
    entry: str


def parse_value(text):
    r"""
    Read a requested condition value given as :code:`<kind>:<magnitude>`.

    Example
    -------
    >>> from pmspy.service.app import parse_value
    >>> str(parse_value('integer:45'))
    'integer:45'
    >>> parse_value(None) is None
    True
    """
    if text is None:
        return None
    kind, sep, magnitude = text.partition(':')
    if not sep:
        msg = (
            f"A requested value must read <kind>:<magnitude>, got '{text}'."
        )
        logger.error(msg)
        raise MalformedName(msg)
    return CondValue.parse(kind, magnitude)


def to_request(body):
    return AccessRequest(
        body.consumer, body.base, body.identifier, body.scope, body.level,
        parse_value(body.value)
    )


def create_app(service=None):
    r"""
    Create the HTTP application.

    Parameters
    ----------
    service : PermissionService
        System to serve, default :code:`PermissionService()` with the
        configuration from the defaults and the environment.

    Returns
    -------
    app : fastapi.FastAPI
        Application with the service attached as :code:`app.state.pms`.
    """
    if service is None:
        service = PermissionService()

    app = FastAPI(
        title="PMSpy",
        description="Permission management system, policy decision point",
        version=__version__,
    )
    app.state.pms = service

    @app.exception_handler(PMSpyError)
    async def _pmspy_error_handler(request: Request, exc: PMSpyError):
        return JSONResponse(
            status_code=status_for(exc), content=error_body(exc)
        )

    @app.exception_handler(ValueError)
    async def _value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=error_body(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_error_handler(
            request: Request, exc: RequestValidationError):
        # the request input is not echoed
        problems = '; '.join(
            f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}"
            for e in exc.errors()
        )
        return JSONResponse(
            status_code=400,
            content={
                'error': 'InvalidRequest',
                'detail': problems.replace(GRANTED, '*' * len(GRANTED))
            }
        )

    def require_admin(authorization: Optional[str] = Header(None)):
        token = service.config.get_attr('admin_token')
        if token is None:
            msg = "No admin token is configured, admin requests are refused."
            logger.error(msg)
            raise BadToken(msg)
        expected = f"Bearer {token}"
        if authorization is None or not secrets.compare_digest(
                authorization.encode(), expected.encode()):
            msg = "Admin requests need the configured bearer token."
            logger.error(msg)
            raise BadToken(msg)

    @app.post('/v1/check')
    def serve_check(body: CheckBody):
        decision = service.check(to_request(body))
        return {
            'outcome': decision.outcome,
            'reason': decision.reason,
            'matched': (
                format_name(decision.matched_entry)
                if decision.granted else None
            ),
        }

    @app.post('/v1/admin/nodes', dependencies=[Depends(require_admin)])
    def add_node(body: NodeBody):
        return {
            'version': service.apply('add_node', body.key, body.entries)
        }

    @app.delete(
        '/v1/admin/nodes/{rn}', dependencies=[Depends(require_admin)]
    )
    def remove_node(rn: str):
        return {'version': service.apply('remove_node', rn)}

    @app.post('/v1/admin/edges', dependencies=[Depends(require_admin)])
    def add_edge(body: EdgeBody):
        return {
            'version': service.apply('add_edge', body.child, body.parent)
        }

    @app.delete('/v1/admin/edges', dependencies=[Depends(require_admin)])
    def remove_edge(child: str, parent: str):
        return {'version': service.apply('remove_edge', child, parent)}

    @app.post('/v1/admin/grant', dependencies=[Depends(require_admin)])
    def grant(body: EntryBody):
        return {'version': service.apply('grant', body.node, body.entry)}

    @app.post('/v1/admin/revoke', dependencies=[Depends(require_admin)])
    def revoke(body: EntryBody):
        return {'version': service.apply('revoke', body.node, body.entry)}

    @app.get('/v1/effective/{rn}')
    def serve_effective(rn: str):
        with service.graph._lock:
            entries = service.effective(rn).to_strings()
            version = service.graph.version
        return {'consumer': rn, 'version': version, 'entries': entries}

    @app.post('/v1/keys/issue')
    def issue_key(body: IssueBody):
        grant = service.issue_key(body.action_point, to_request(body))
        return {
            'key_id': grant.key_id,
            'public_key': grant.public_key.hex(),
            'issued_at': grant.issued_at,
            'expires_at': grant.expires_at,
            'action_point': grant.action_point,
            'consumer': grant.consumer,
        }

    @app.get('/v1/keys/{key_id}/verify')
    def verify_key(key_id: str):
        return {'key_id': key_id, 'state': service.verify_key(key_id)}

    @app.post(
        '/v1/keys/{key_id}/revoke', dependencies=[Depends(require_admin)]
    )
    def revoke_key(key_id: str):
        service.revoke_key(key_id)
        return {'key_id': key_id, 'state': service.verify_key(key_id)}

    @app.get('/v1/audit/{rn}')
    def serve_audit(
            rn: str,
            start: Optional[int] = Query(None, alias='from'),
            end: Optional[int] = Query(None, alias='to')):
        records = service.audit_records(rn, start, end)
        return {
            'consumer': rn,
            'records': [
                {
                    'seq': r.seq, 'millis': r.millis, 'request': r.request,
                    'outcome': r.outcome, 'reason': r.reason
                }
                for r in records
            ],
        }

    @app.get('/v1/healthz')
    def healthz():
        return service.health()

    return app
